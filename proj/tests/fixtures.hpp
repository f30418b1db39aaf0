/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file fixtures.hpp
  \brief Deterministic fixtures and counting oracles shared by the unit and
         acceptance suites
*/

#pragma once

#include <synkit/netlist.hpp>

namespace synkit_test
{

using namespace synkit;

/* counting oracles, independent of the pass implementation: a w-bit b-way
   balanced mux tree needs w*(b-1) MUX cells in ceil(log2 b) levels; a
   barrel shifter needs WS levels of WA MUX cells */
inline uint32_t oracle_blockmux_muxes( uint32_t wy, uint32_t blocks ) { return wy * ( blocks - 1 ); }
inline uint32_t oracle_blockmux_depth( uint32_t blocks ) { return clog2( blocks ); }
inline uint32_t oracle_barrel_muxes( uint32_t wa, uint32_t ws ) { return ws * wa; }
inline uint32_t oracle_barrel_depth( uint32_t ws ) { return ws; }

enum class select_form
{
  concat_zeros, //!< S = {idx, k zero bits}
  mul_const     //!< S = MUL(idx, stride)
};

/*! \brief Part-select fixture: WA = blocks*stride, WY = stride. */
inline netlist shiftx_fixture( uint32_t blocks, uint32_t stride, select_form form )
{
  netlist n;
  n.name = "ps_b" + std::to_string( blocks ) + "_s" + std::to_string( stride );
  uint32_t wa = blocks * stride;
  uint32_t wy = stride;
  uint32_t wi = std::max<uint32_t>( clog2( blocks ), 1 );
  net_id a = n.add_port( "a", port_dir::in, wa );
  net_id idx = n.add_port( "idx", port_dir::in, wi );
  net_id y = n.add_port( "y", port_dir::out, wy );

  cell sx;
  sx.kind = cell_kind::SHIFTX;
  sx.name = "sx";
  sx.pins["A"] = signal_ref::whole( a, wa );
  sx.pins["Y"] = signal_ref::whole( y, wy );

  if ( form == select_form::concat_zeros )
  {
    uint32_t k = clog2( stride );
    signal_ref s;
    for ( uint32_t i = 0; i < k; ++i )
      s.append_bit( bit_ref::constant( false ) );
    s.append( signal_ref::whole( idx, wi ) );
    uint32_t ws = k + wi;
    sx.params = { { "WA", wa }, { "WS", ws }, { "WY", wy } };
    sx.pins["S"] = std::move( s );
  }
  else
  {
    uint32_t ws = std::max( clog2( uint64_t( blocks - 1 ) * stride + 1 ), 1u );
    net_id s = n.add_net( "s", ws );
    std::vector<bool> kbits( std::max( clog2( uint64_t( stride ) + 1 ), 1u ), false );
    for ( uint32_t i = 0; i < kbits.size(); ++i )
      kbits[i] = ( stride >> i ) & 1;
    cell mul;
    mul.kind = cell_kind::MUL;
    mul.name = "stride_mul";
    mul.params = { { "WA", wi }, { "WB", static_cast<int64_t>( kbits.size() ) }, { "WY", ws } };
    mul.pins["A"] = signal_ref::whole( idx, wi );
    mul.pins["B"] = signal_ref::constant( kbits );
    mul.pins["Y"] = signal_ref::whole( s, ws );
    n.add_cell( std::move( mul ) );
    sx.params = { { "WA", wa }, { "WS", ws }, { "WY", wy } };
    sx.pins["S"] = signal_ref::whole( s, ws );
  }
  n.add_cell( std::move( sx ) );
  return n;
}

inline cell_id the_shiftx( netlist const& n )
{
  for ( auto const& [cid, c] : n.cells )
    if ( c.kind == cell_kind::SHIFTX )
      return cid;
  throw std::logic_error( "no SHIFTX in fixture" );
}

} // namespace synkit_test
