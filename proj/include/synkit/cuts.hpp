/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file cuts.hpp
  \brief Priority k-feasible cut enumeration with truth tables

  Bottom-up merge of fanin cut sets. Each node keeps at most C nontrivial
  cuts ranked by (leaf count, lexicographic leaves) after dominance
  filtering, plus its trivial cut. Truth tables cover up to six leaves.
*/

#pragma once

#include "aig.hpp"

namespace synkit
{

struct cut
{
  std::vector<uint32_t> leaves; //!< sorted node ids
  uint64_t tt{ 0 };             //!< over leaves, low 2^k bits

  uint32_t size() const { return static_cast<uint32_t>( leaves.size() ); }

  bool dominates( cut const& other ) const
  {
    if ( leaves.size() > other.leaves.size() )
      return false;
    return std::includes( other.leaves.begin(), other.leaves.end(), leaves.begin(), leaves.end() );
  }
};

struct cut_set
{
  std::vector<cut> cuts; //!< ranked nontrivial cuts, then the trivial cut last
};

namespace cut_detail
{

inline constexpr uint64_t projections[6] = {
    0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
    0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };

inline uint64_t tt_mask_k( uint32_t k )
{
  return k >= 6 ? ~uint64_t( 0 ) : ( ( uint64_t( 1 ) << ( 1u << k ) ) - 1 );
}

/* re-expresses `tt` over `sub` onto the superset leaf list `super` */
inline uint64_t expand_tt( uint64_t tt, std::vector<uint32_t> const& sub, std::vector<uint32_t> const& super )
{
  uint32_t k = static_cast<uint32_t>( super.size() );
  std::vector<uint32_t> pos( sub.size() );
  for ( size_t i = 0; i < sub.size(); ++i )
    pos[i] = static_cast<uint32_t>( std::lower_bound( super.begin(), super.end(), sub[i] ) - super.begin() );
  uint64_t out = 0;
  for ( uint32_t m = 0; m < ( 1u << k ); ++m )
  {
    uint32_t sm = 0;
    for ( size_t i = 0; i < sub.size(); ++i )
      sm |= ( ( m >> pos[i] ) & 1 ) << i;
    out |= ( ( tt >> sm ) & 1ull ) << m;
  }
  return out;
}

inline bool cut_rank_less( cut const& a, cut const& b )
{
  if ( a.leaves.size() != b.leaves.size() )
    return a.leaves.size() < b.leaves.size();
  return a.leaves < b.leaves;
}

} // namespace cut_detail

/*! \brief Per-node priority cut sets (indexable by node id). */
inline std::vector<cut_set> enumerate_cuts( aig const& g, uint32_t k, uint32_t c )
{
  if ( k < 2 || k > 6 )
    throw std::invalid_argument( "cut size must be within [2, 6]" );
  if ( c < 1 )
    throw std::invalid_argument( "cut limit must be >= 1" );

  std::vector<cut_set> sets( g.num_nodes() );
  for ( uint32_t n = 1; n <= g.num_pis(); ++n )
    sets[n].cuts.push_back( cut{ { n }, 0x2 } ); // projection of one leaf

  for ( uint32_t n = g.num_pis() + 1; n < g.num_nodes(); ++n )
  {
    auto const& nd = g.at( n );
    uint32_t v0 = lit_node( nd.fan0 ), v1 = lit_node( nd.fan1 );
    bool c0 = lit_comp( nd.fan0 ), c1 = lit_comp( nd.fan1 );

    std::vector<cut> merged;
    for ( auto const& cu0 : sets[v0].cuts )
    {
      for ( auto const& cu1 : sets[v1].cuts )
      {
        std::vector<uint32_t> leaves;
        std::set_union( cu0.leaves.begin(), cu0.leaves.end(), cu1.leaves.begin(), cu1.leaves.end(),
                        std::back_inserter( leaves ) );
        if ( leaves.size() > k )
          continue;
        uint64_t t0 = cut_detail::expand_tt( cu0.tt, cu0.leaves, leaves );
        uint64_t t1 = cut_detail::expand_tt( cu1.tt, cu1.leaves, leaves );
        if ( c0 )
          t0 = ~t0;
        if ( c1 )
          t1 = ~t1;
        uint64_t tt = t0 & t1 & cut_detail::tt_mask_k( static_cast<uint32_t>( leaves.size() ) );
        merged.push_back( cut{ std::move( leaves ), tt } );
      }
    }
    std::sort( merged.begin(), merged.end(), cut_detail::cut_rank_less );
    /* dominance filtering, then cap at C */
    std::vector<cut> kept;
    for ( auto& cand : merged )
    {
      bool dominated = false;
      for ( auto const& have : kept )
      {
        if ( have.dominates( cand ) )
        {
          dominated = true;
          break;
        }
      }
      if ( !dominated )
      {
        kept.push_back( std::move( cand ) );
        if ( kept.size() == c )
          break;
      }
    }
    kept.push_back( cut{ { n }, 0x2 } ); // trivial cut, always present
    sets[n].cuts = std::move( kept );
  }
  return sets;
}

/*! \brief Truth table of the cone between `root` and the cut leaves by
 *         64-lane cone simulation over leaf projections.
 */
inline uint64_t cut_truth( aig const& g, uint32_t root, std::vector<uint32_t> const& leaves )
{
  if ( leaves.size() > 6 )
    throw std::invalid_argument( "cut truth tables support up to 6 leaves" );
  std::map<uint32_t, uint64_t> val;
  for ( size_t i = 0; i < leaves.size(); ++i )
    val[leaves[i]] = cut_detail::projections[i];
  val[0] = 0;

  /* iterative postorder over the cone */
  std::vector<uint32_t> stack{ root };
  while ( !stack.empty() )
  {
    uint32_t v = stack.back();
    if ( val.count( v ) )
    {
      stack.pop_back();
      continue;
    }
    if ( !g.is_and( v ) )
      throw std::invalid_argument( "cut does not cover the cone (reached a PI)" );
    auto const& nd = g.at( v );
    uint32_t a = lit_node( nd.fan0 ), b = lit_node( nd.fan1 );
    bool ready = true;
    for ( uint32_t f : { a, b } )
    {
      if ( !val.count( f ) )
      {
        stack.push_back( f );
        ready = false;
      }
    }
    if ( !ready )
      continue;
    uint64_t x = val[a] ^ ( lit_comp( nd.fan0 ) ? ~uint64_t( 0 ) : 0 );
    uint64_t y = val[b] ^ ( lit_comp( nd.fan1 ) ? ~uint64_t( 0 ) : 0 );
    val[v] = x & y;
    stack.pop_back();
  }
  return val[root] & cut_detail::tt_mask_k( static_cast<uint32_t>( leaves.size() ) );
}

/*! \brief Nodes strictly inside the cone (root included, leaves excluded),
 *         in topological order.
 */
inline std::vector<uint32_t> cone_nodes( aig const& g, uint32_t root, std::vector<uint32_t> const& leaves )
{
  std::set<uint32_t> leaf_set( leaves.begin(), leaves.end() );
  std::set<uint32_t> cone;
  std::vector<uint32_t> work{ root };
  if ( leaf_set.count( root ) )
    return {};
  while ( !work.empty() )
  {
    uint32_t v = work.back();
    work.pop_back();
    if ( cone.count( v ) || leaf_set.count( v ) )
      continue;
    if ( !g.is_and( v ) )
      continue;
    cone.insert( v );
    work.push_back( lit_node( g.at( v ).fan0 ) );
    work.push_back( lit_node( g.at( v ).fan1 ) );
  }
  return { cone.begin(), cone.end() }; // node ids are topological
}

} // namespace synkit
