/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file prefix_network.hpp
  \brief Parallel-prefix carry networks: ripple, Brent-Kung, and Sklansky

  A network over n (generate, propagate) pairs computes, for every output
  position i, the group term covering span [i..0]. Nodes merge a high span
  [msb..mid] with the adjacent low span [mid-1..lsb]. The structure is kept
  explicit so size and depth can be checked independently of gate emission.
*/

#pragma once

#include <cassert>
#include <map>
#include <stdexcept>
#include <vector>

#include "common.hpp"

namespace synkit
{

enum class prefix_arch
{
  ripple,
  brent_kung,
  sklansky
};

inline std::string to_string( prefix_arch a )
{
  switch ( a )
  {
  case prefix_arch::ripple: return "ripple";
  case prefix_arch::brent_kung: return "brent-kung";
  case prefix_arch::sklansky: return "sklansky";
  }
  return "?";
}

struct prefix_node
{
  uint32_t level; //!< 1 + max level of both producers
  uint32_t msb;   //!< output span [msb..lsb]
  uint32_t mid;   //!< high child [msb..mid], low child [mid-1..lsb]
  uint32_t lsb;
};

class prefix_network
{
public:
  static prefix_network build( uint32_t width, prefix_arch arch )
  {
    prefix_network pn;
    pn.width_ = width;
    pn.arch_ = arch;
    for ( uint32_t i = 0; i < width; ++i )
      pn.level_[{ i, i }] = 0;

    switch ( arch )
    {
    case prefix_arch::ripple:
      for ( uint32_t i = 1; i < width; ++i )
        pn.add_node( i, i, 0 );
      break;

    case prefix_arch::sklansky:
      for ( uint32_t l = 1; ( uint32_t( 1 ) << ( l - 1 ) ) < width; ++l )
      {
        uint32_t half = uint32_t( 1 ) << ( l - 1 );
        for ( uint32_t i = 0; i < width; ++i )
        {
          if ( ( i >> ( l - 1 ) ) & 1 )
          {
            uint32_t mid = i & ~( half - 1 );        // low end of the current span of i
            uint32_t lsb = i & ~( ( half << 1 ) - 1 ); // block base after merging
            pn.add_node( i, mid, lsb );
          }
        }
      }
      break;

    case prefix_arch::brent_kung:
    {
      uint32_t lmax = 0;
      while ( ( uint32_t( 1 ) << ( lmax + 1 ) ) <= width )
        ++lmax;
      /* up-sweep: merge blocks of doubling size at positions k*2^l - 1 */
      for ( uint32_t l = 1; l <= lmax; ++l )
      {
        uint32_t step = uint32_t( 1 ) << l;
        for ( uint32_t i = step - 1; i < width; i += step )
          pn.add_node( i, i - step / 2 + 1, i - step + 1 );
      }
      /* down-sweep: complete the remaining prefixes against [x..0] spans */
      for ( uint32_t l = lmax; l >= 1; --l )
      {
        uint32_t half = uint32_t( 1 ) << ( l - 1 );
        for ( uint32_t i = 3 * half - 1; i < width; i += 2 * half )
          pn.add_node( i, i - half + 1, 0 );
      }
      break;
    }
    }

    /* every position must end complete */
    for ( uint32_t i = 0; i < width; ++i )
    {
      if ( i > 0 && !pn.level_.count( { i, 0 } ) )
        throw std::logic_error( "prefix network incomplete at position " + std::to_string( i ) );
    }
    return pn;
  }

  uint32_t width() const { return width_; }
  prefix_arch arch() const { return arch_; }
  std::vector<prefix_node> const& nodes() const { return nodes_; }
  uint32_t op_count() const { return static_cast<uint32_t>( nodes_.size() ); }

  uint32_t depth() const
  {
    uint32_t d = 0;
    for ( auto const& n : nodes_ )
      d = std::max( d, n.level );
    return d;
  }

  /*! \brief Structural check: every node merges adjacent spans that were
   *         produced earlier, and output i covers exactly [i..0].
   */
  bool spans_consistent() const
  {
    std::map<std::pair<uint32_t, uint32_t>, uint32_t> level;
    for ( uint32_t i = 0; i < width_; ++i )
      level[{ i, i }] = 0;
    for ( auto const& n : nodes_ )
    {
      auto hi = level.find( { n.msb, n.mid } );
      auto lo = level.find( { n.mid - 1, n.lsb } );
      if ( hi == level.end() || lo == level.end() )
        return false;
      if ( n.level != 1 + std::max( hi->second, lo->second ) )
        return false;
      level[{ n.msb, n.lsb }] = n.level;
    }
    for ( uint32_t i = 1; i < width_; ++i )
    {
      if ( !level.count( { i, 0 } ) )
        return false;
    }
    return true;
  }

private:
  void add_node( uint32_t msb, uint32_t mid, uint32_t lsb )
  {
    auto hi = level_.find( { msb, mid } );
    auto lo = level_.find( { mid - 1, lsb } );
    assert( hi != level_.end() && lo != level_.end() );
    uint32_t lvl = 1 + std::max( hi->second, lo->second );
    nodes_.push_back( prefix_node{ lvl, msb, mid, lsb } );
    level_[{ msb, lsb }] = lvl;
  }

  uint32_t width_{ 0 };
  prefix_arch arch_{ prefix_arch::ripple };
  std::vector<prefix_node> nodes_;
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> level_; // span -> level
};

} // namespace synkit
