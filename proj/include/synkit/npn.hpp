/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file npn.hpp
  \brief NPN canonicalization of truth tables up to six inputs

  A transform (perm, input complements, output complement) maps a function
  f to g with g(x_0..x_{k-1}) = oc ^ f(y), y[perm[j]] = x_j ^ comp_j.
  Canonicalization is exhaustive for k <= 4 (lexicographically smallest
  table over all transforms). For k in {5, 6} a deterministic semi-canonical
  procedure is used: polarity normalization by counts, input sorting by
  cofactor weight, then first-improving hill climbing over single swaps and
  flips. The same procedure keys both record insertion and lookup, so
  probes are consistent; orbit members may map to different representatives
  (missed hits are possible, wrong hits are not).
*/

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "common.hpp"

namespace synkit
{

struct npn_transform
{
  std::array<uint8_t, 6> perm{ 0, 1, 2, 3, 4, 5 };
  uint8_t input_comp{ 0 };
  bool output_comp{ false };
  uint8_t k{ 0 };
};

struct npn_result
{
  uint64_t canonical{ 0 };
  npn_transform transform;
};

namespace npn_detail
{

inline uint64_t tt_mask( uint32_t k )
{
  return k >= 6 ? ~uint64_t( 0 ) : ( ( uint64_t( 1 ) << ( 1u << k ) ) - 1 );
}

} // namespace npn_detail

/*! \brief g[m] = oc ^ f[tau(m)] with tau scattering bit j to perm[j] after
 *         complementation: canonical = apply(transform, original).
 */
inline uint64_t npn_apply( npn_transform const& t, uint64_t f )
{
  uint32_t k = t.k;
  uint64_t g = 0;
  for ( uint32_t m = 0; m < ( 1u << k ); ++m )
  {
    uint32_t y = 0;
    for ( uint32_t j = 0; j < k; ++j )
    {
      uint32_t bit = ( ( m >> j ) & 1 ) ^ ( ( t.input_comp >> j ) & 1 );
      y |= bit << t.perm[j];
    }
    uint64_t v = ( ( f >> y ) & 1 ) ^ ( t.output_comp ? 1 : 0 );
    g |= v << m;
  }
  return g & npn_detail::tt_mask( k );
}

/*! \brief Inverse: original = npn_apply_inverse(transform, canonical). */
inline uint64_t npn_apply_inverse( npn_transform const& t, uint64_t g )
{
  uint32_t k = t.k;
  uint64_t f = 0;
  for ( uint32_t my = 0; my < ( 1u << k ); ++my )
  {
    uint32_t x = 0;
    for ( uint32_t j = 0; j < k; ++j )
    {
      uint32_t bit = ( ( my >> t.perm[j] ) & 1 ) ^ ( ( t.input_comp >> j ) & 1 );
      x |= bit << j;
    }
    uint64_t v = ( ( g >> x ) & 1 ) ^ ( t.output_comp ? 1 : 0 );
    f |= v << my;
  }
  return f & npn_detail::tt_mask( k );
}

namespace npn_detail
{

inline std::vector<std::vector<uint8_t>> const& perms_of( uint32_t k )
{
  static std::vector<std::vector<std::vector<uint8_t>>> cache( 7 );
  auto& entry = cache[k];
  if ( entry.empty() )
  {
    std::vector<uint8_t> p( k );
    std::iota( p.begin(), p.end(), 0 );
    do
    {
      entry.push_back( p );
    } while ( std::next_permutation( p.begin(), p.end() ) );
  }
  return entry;
}

/* scatter tables: for each k-permutation p, scatter[m] moves bit j of m to
   position p[j]; then apply(T, f)[m] = oc ^ f[scatter[m ^ comp]] */
inline std::vector<std::vector<uint16_t>> const& scatters_of( uint32_t k )
{
  static std::vector<std::vector<std::vector<uint16_t>>> cache( 7 );
  auto& entry = cache[k];
  if ( entry.empty() )
  {
    for ( auto const& p : perms_of( k ) )
    {
      std::vector<uint16_t> sc( 1u << k );
      for ( uint32_t m = 0; m < ( 1u << k ); ++m )
      {
        uint16_t y = 0;
        for ( uint32_t j = 0; j < k; ++j )
          y |= ( ( m >> j ) & 1 ) << p[j];
        sc[m] = y;
      }
      entry.push_back( std::move( sc ) );
    }
  }
  return entry;
}

inline npn_result exhaustive_canon( uint64_t tt, uint32_t k )
{
  npn_result best;
  best.canonical = ~uint64_t( 0 );
  uint32_t points = 1u << k;
  uint64_t mask = tt_mask( k );
  auto const& perms = perms_of( k );
  auto const& scatters = scatters_of( k );
  for ( size_t pi = 0; pi < perms.size(); ++pi )
  {
    auto const& sc = scatters[pi];
    for ( uint32_t c = 0; c < points; ++c )
    {
      uint64_t cand = 0;
      for ( uint32_t m = 0; m < points; ++m )
        cand |= ( ( tt >> sc[m ^ c] ) & 1 ) << m;
      uint64_t candn = ~cand & mask;
      uint64_t lo = std::min( cand, candn );
      if ( lo < best.canonical )
      {
        best.canonical = lo;
        npn_transform t;
        t.k = static_cast<uint8_t>( k );
        std::copy( perms[pi].begin(), perms[pi].end(), t.perm.begin() );
        t.input_comp = static_cast<uint8_t>( c );
        t.output_comp = candn < cand;
        best.transform = t;
      }
    }
  }
  return best;
}

/* First-improving hill climbing from the identity transform. Single moves
   on the transform correspond one-to-one to single moves on the current
   table, so a local minimum re-canonicalizes to itself (idempotence). */
inline npn_result semicanon( uint64_t tt, uint32_t k )
{
  npn_transform t;
  t.k = static_cast<uint8_t>( k );
  uint64_t cur = npn_apply( t, tt );
  bool improved = true;
  while ( improved )
  {
    improved = false;
    for ( uint32_t i = 0; i < k && !improved; ++i )
    {
      for ( uint32_t j = i + 1; j < k && !improved; ++j )
      {
        /* swapping positions must carry the complement bits along, so the
           move set matches single swaps applied to the current table */
        npn_transform t2 = t;
        std::swap( t2.perm[i], t2.perm[j] );
        bool ci = ( t2.input_comp >> i ) & 1;
        bool cj = ( t2.input_comp >> j ) & 1;
        t2.input_comp = static_cast<uint8_t>( ( t2.input_comp & ~( ( 1u << i ) | ( 1u << j ) ) ) | ( ( cj ? 1u : 0u ) << i ) | ( ( ci ? 1u : 0u ) << j ) );
        uint64_t cand = npn_apply( t2, tt );
        if ( cand < cur )
        {
          t = t2;
          cur = cand;
          improved = true;
        }
      }
    }
    for ( uint32_t i = 0; i < k && !improved; ++i )
    {
      npn_transform t2 = t;
      t2.input_comp ^= uint8_t( 1 ) << i;
      uint64_t cand = npn_apply( t2, tt );
      if ( cand < cur )
      {
        t = t2;
        cur = cand;
        improved = true;
      }
    }
    if ( !improved )
    {
      npn_transform t2 = t;
      t2.output_comp = !t2.output_comp;
      uint64_t cand = npn_apply( t2, tt );
      if ( cand < cur )
      {
        t = t2;
        cur = cand;
        improved = true;
      }
    }
  }
  return npn_result{ cur, t };
}

} // namespace npn_detail

/*! \brief Canonicalizes a k-input truth table; exhaustive for k <= 4. */
inline npn_result npn_canon( uint64_t tt, uint32_t k )
{
  tt &= npn_detail::tt_mask( k );
  if ( k <= 4 )
    return npn_detail::exhaustive_canon( tt, k );
  return npn_detail::semicanon( tt, k );
}

} // namespace synkit
