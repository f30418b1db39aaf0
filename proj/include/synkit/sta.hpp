/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file sta.hpp
  \brief Static timing over mapped netlists and GE-normalized area reports

  Arrival(pin) = max over fanin arcs of arrival + intrinsic + slope * load,
  load = sum of reader input capacitances on the driven bit. Registers cut
  the graph: Q bits start at 0, D pins are endpoints. Wire load is zero.
*/

#pragma once

#include "cell_library.hpp"
#include "netlist.hpp"
#include "techmap.hpp"

namespace synkit
{

struct timing_report
{
  double arrival_ps{ 0 };
  uint32_t logic_levels{ 0 };
  std::string endpoint;                    //!< port bit, e.g. "y[3]"
  std::vector<std::string> critical_path;  //!< "inst:pin" hops, source first
  std::map<std::string, double> endpoint_slack; //!< per endpoint when a target is set
};

struct area_report_t
{
  double total_ge{ 0 };
  double area_sum{ 0 };
  std::map<std::string, uint32_t> per_cell;
};

/*! \brief Exact longest-path analysis; matches brute-force enumeration. */
inline timing_report sta( netlist const& mapped_in, cell_library const& lib, compiled_timing const& timing,
                          std::optional<double> delay_target = {} )
{
  netlist n = comb_view( mapped_in );
  for ( auto const& [cid, c] : n.cells )
  {
    if ( c.kind != cell_kind::LIB && c.kind != cell_kind::BUF )
      throw unmapped_cell( "sta requires a mapped netlist, found " + to_string( c.kind ) + " '" + c.name + "'" );
  }

  /* per-bit load: sum of reader pin caps */
  std::map<std::pair<net_id, uint32_t>, double> load;
  for ( auto const& [cid, c] : n.cells )
  {
    for ( auto const& [pin, sr] : c.pins )
    {
      if ( pin == "Y" )
        continue;
      double cap = 0;
      if ( c.kind == cell_kind::LIB )
      {
        if ( auto* def = lib.find( c.lib_cell ) )
        {
          for ( auto const& p : def->pins )
            if ( !p.is_output && p.name == pin )
              cap = p.cap_ff;
        }
      }
      for ( auto b : sr.bits() )
        if ( !b.is_const )
          load[{ b.net, b.index }] += cap;
    }
  }

  struct arrival_t
  {
    double t{ 0 };
    uint32_t levels{ 0 };
    cell_id via_cell{ 0 };
    std::string via_pin;
    bool has_pred{ false };
    bit_ref pred_bit;
  };
  std::map<std::pair<net_id, uint32_t>, arrival_t> arr;

  auto get = [&]( bit_ref b ) -> arrival_t {
    if ( b.is_const )
      return {};
    auto it = arr.find( { b.net, b.index } );
    return it == arr.end() ? arrival_t{} : it->second;
  };

  for ( auto cid : topo_order( n ) )
  {
    auto const& c = n.cells.at( cid );
    auto ybit = c.pins.at( "Y" ).bit( 0 );
    if ( ybit.is_const )
      continue;
    double out_load = load.count( { ybit.net, ybit.index } ) ? load[{ ybit.net, ybit.index }] : 0.0;
    arrival_t best;
    bool first = true;
    for ( auto const& [pin, sr] : c.pins )
    {
      if ( pin == "Y" )
        continue;
      auto b = sr.bit( 0 );
      auto in = get( b );
      double arc_delay = 0;
      if ( c.kind == cell_kind::LIB )
      {
        auto const& a = timing.arc( c.lib_cell, pin );
        arc_delay = a.intrinsic_ps + a.slope_ps_per_ff * out_load;
      }
      arrival_t cand;
      cand.t = in.t + arc_delay;
      cand.levels = in.levels + 1;
      cand.via_cell = cid;
      cand.via_pin = pin;
      cand.has_pred = true;
      cand.pred_bit = b;
      if ( first || cand.t > best.t || ( cand.t == best.t && cand.levels > best.levels ) )
      {
        best = cand;
        first = false;
      }
    }
    arr[{ ybit.net, ybit.index }] = best;
  }

  timing_report rep;
  bit_ref worst_bit = bit_ref::constant( false );
  for ( auto const& p : n.ports )
  {
    if ( p.dir != port_dir::out )
      continue;
    for ( uint32_t i = 0; i < p.width; ++i )
    {
      auto a = get( bit_ref::of_net( p.net, i ) );
      std::string ep = p.name + "[" + std::to_string( i ) + "]";
      if ( delay_target )
        rep.endpoint_slack[ep] = *delay_target - a.t;
      if ( a.t > rep.arrival_ps || rep.endpoint.empty() )
      {
        if ( a.t >= rep.arrival_ps )
        {
          rep.arrival_ps = a.t;
          rep.logic_levels = a.levels;
          rep.endpoint = ep;
          worst_bit = bit_ref::of_net( p.net, i );
        }
      }
    }
  }

  /* walk the critical path back to its source */
  std::vector<std::string> hops;
  bit_ref b = worst_bit;
  while ( !b.is_const )
  {
    auto it = arr.find( { b.net, b.index } );
    if ( it == arr.end() || !it->second.has_pred )
      break;
    auto const& a = it->second;
    hops.push_back( n.cells.at( a.via_cell ).name + ":" + a.via_pin );
    b = a.pred_bit;
  }
  std::reverse( hops.begin(), hops.end() );
  rep.critical_path = std::move( hops );
  return rep;
}

/*! \brief Total area normalized to the NAND2 cell. */
inline area_report_t area_report( netlist const& mapped, cell_library const& lib )
{
  area_report_t rep;
  double nand2 = lib.nand2_area();
  for ( auto const& [cid, c] : mapped.cells )
  {
    if ( c.kind != cell_kind::LIB )
      continue;
    auto* def = lib.find( c.lib_cell );
    if ( !def )
      throw unmapped_cell( "library has no cell '" + c.lib_cell + "'" );
    rep.area_sum += def->area_ge;
    ++rep.per_cell[c.lib_cell];
  }
  rep.total_ge = rep.area_sum / nand2;
  return rep;
}

} // namespace synkit
