/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file record_library.hpp
  \brief Library of records: best-known AND structures keyed by canonical
         truth table
*/

#pragma once

#include "npn.hpp"

namespace synkit
{

/*! \brief AND DAG over k abstract inputs. Literals: (idx << 1) | comp,
 *         idx < k refers to input idx, otherwise to node idx - k.
 */
struct record_structure
{
  uint32_t k{ 0 };
  struct rnode
  {
    uint32_t f0{ 0 }, f1{ 0 }; //!< literals
    bool operator==( rnode const& ) const = default;
  };
  std::vector<rnode> nodes;
  uint32_t out{ 0 }; //!< literal

  bool operator==( record_structure const& ) const = default;

  uint32_t ands() const { return static_cast<uint32_t>( nodes.size() ); }

  uint32_t depth() const
  {
    std::vector<uint32_t> lvl( nodes.size(), 0 );
    uint32_t ref_lvl = 0;
    auto level_of = [&]( uint32_t l ) {
      uint32_t idx = l >> 1;
      return idx < k ? 0 : lvl[idx - k];
    };
    for ( size_t i = 0; i < nodes.size(); ++i )
      lvl[i] = 1 + std::max( level_of( nodes[i].f0 ), level_of( nodes[i].f1 ) );
    ref_lvl = ( out >> 1 ) < k || nodes.empty() ? level_of( out ) : lvl[( out >> 1 ) - k];
    return ref_lvl;
  }

  /*! \brief Per-input depth: longest path from the output to that input
   *         in AND levels (UINT32_MAX when the input is unused).
   */
  std::vector<uint32_t> input_depths() const
  {
    std::vector<std::vector<uint32_t>> d( nodes.size(), std::vector<uint32_t>( k, 0 ) );
    std::vector<std::vector<bool>> reach( nodes.size(), std::vector<bool>( k, false ) );
    auto merge = [&]( size_t ni, uint32_t l ) {
      uint32_t idx = l >> 1;
      if ( idx < k )
      {
        reach[ni][idx] = true;
        d[ni][idx] = std::max( d[ni][idx], 1u );
      }
      else
      {
        for ( uint32_t i = 0; i < k; ++i )
        {
          if ( reach[idx - k][i] )
          {
            reach[ni][i] = true;
            d[ni][i] = std::max( d[ni][i], d[idx - k][i] + 1 );
          }
        }
      }
    };
    for ( size_t ni = 0; ni < nodes.size(); ++ni )
    {
      merge( ni, nodes[ni].f0 );
      merge( ni, nodes[ni].f1 );
    }
    std::vector<uint32_t> out_d( k, UINT32_MAX );
    uint32_t oidx = out >> 1;
    if ( oidx < k )
    {
      out_d[oidx] = 0;
    }
    else if ( !nodes.empty() )
    {
      for ( uint32_t i = 0; i < k; ++i )
        if ( reach[oidx - k][i] )
          out_d[i] = d[oidx - k][i];
    }
    return out_d;
  }

  /*! \brief Truth table over the k inputs. */
  uint64_t simulate() const
  {
    std::vector<uint64_t> val( k + nodes.size() );
    for ( uint32_t i = 0; i < k; ++i )
      val[i] = cut_detail_projection( i );
    for ( size_t i = 0; i < nodes.size(); ++i )
    {
      uint64_t a = lit_val( val, nodes[i].f0 );
      uint64_t b = lit_val( val, nodes[i].f1 );
      val[k + i] = a & b;
    }
    uint64_t o = lit_val( val, out );
    return o & ( k >= 6 ? ~uint64_t( 0 ) : ( ( uint64_t( 1 ) << ( 1u << k ) ) - 1 ) );
  }

private:
  static uint64_t cut_detail_projection( uint32_t i )
  {
    static constexpr uint64_t proj[6] = {
        0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
        0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
    return proj[i];
  }
  static uint64_t lit_val( std::vector<uint64_t> const& val, uint32_t l )
  {
    return val[l >> 1] ^ ( ( l & 1 ) ? ~uint64_t( 0 ) : 0 );
  }
};

/*! \brief Map from (arity, canonical truth table) to the best structure
 *         under lexicographic (depth, ands).
 */
class record_library
{
public:
  explicit record_library( uint32_t k_max = 6 ) : k_( k_max ) {}

  uint32_t k_max() const { return k_; }

  std::map<std::pair<uint32_t, uint64_t>, record_structure> const& entries() const { return entries_; }

  record_structure const* lookup( uint32_t k, uint64_t canonical_tt ) const
  {
    auto it = entries_.find( { k, canonical_tt } );
    return it == entries_.end() ? nullptr : &it->second;
  }

  /*! \brief Inserts or replaces when strictly better under (depth, ands).
   *         The structure must simulate to the canonical key.
   */
  bool offer( uint64_t canonical_tt, record_structure s )
  {
    if ( s.simulate() != canonical_tt )
      throw non_canonical_entry( "structure does not implement its key" );
    auto key = std::make_pair( s.k, canonical_tt );
    auto it = entries_.find( key );
    if ( it == entries_.end() )
    {
      entries_.emplace( key, std::move( s ) );
      return true;
    }
    auto cost = std::make_pair( s.depth(), s.ands() );
    auto have = std::make_pair( it->second.depth(), it->second.ands() );
    if ( cost < have )
    {
      it->second = std::move( s );
      return true;
    }
    return false;
  }

  size_t size() const { return entries_.size(); }

private:
  uint32_t k_;
  std::map<std::pair<uint32_t, uint64_t>, record_structure> entries_;
};

} // namespace synkit
