/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file techmap.hpp
  \brief Slew/gain delay-model compilation and priority-cut NPN matching to
         standard cells

  The delay model linearizes each liberty-style table at (slew, load0),
  load0 = gain times the cell's own average input capacitance; mapping then
  uses intrinsic + slope * default_load as the arc estimate. Matching is
  exact-table over all input permutations and polarities of each library
  cell (arity <= 4); node phases are mapped separately with inverters
  closing the polarity gaps.
*/

#pragma once

#include "cell_library.hpp"
#include "cuts.hpp"
#include "lms.hpp"
#include "npn.hpp"

namespace synkit
{

struct delay_params
{
  double slew_ps{ 20.0 };
  double gain{ 3.0 };
  std::optional<double> delay_target_ps;
};

struct compiled_arc
{
  double intrinsic_ps{ 1.0 };
  double slope_ps_per_ff{ 0.0 };
};

struct compiled_timing
{
  std::map<std::pair<std::string, std::string>, compiled_arc> arcs; //!< (cell, input pin)
  double default_load_ff{ 1.0 };                                    //!< mapping-time load estimate
  bool unit{ false };

  compiled_arc const& arc( std::string const& cell, std::string const& pin ) const
  {
    static const compiled_arc unit_arc{ 1.0, 0.0 };
    auto it = arcs.find( { cell, pin } );
    if ( it == arcs.end() )
      return unit_arc;
    return it->second;
  }

  double estimate( std::string const& cell, std::string const& pin ) const
  {
    auto const& a = arc( cell, pin );
    return a.intrinsic_ps + a.slope_ps_per_ff * default_load_ff;
  }

  /*! \brief Every arc costs one unit: the pre-fix behavior where liberty
   *         timings are ignored.
   */
  static compiled_timing unit_delays( cell_library const& lib )
  {
    compiled_timing t;
    t.unit = true;
    t.default_load_ff = 0.0;
    for ( auto const& c : lib.cells )
    {
      for ( auto const& a : c.arcs )
        t.arcs[{ c.name, a.in_pin }] = compiled_arc{ 1.0, 0.0 };
    }
    return t;
  }
};

/*! \brief Evaluates each arc's table at (slew, gain * avg input cap):
 *         bilinear interpolation for the intrinsic, central finite
 *         difference in load for the slope.
 */
inline compiled_timing compile_timing( cell_library const& lib, delay_params const& params )
{
  compiled_timing t;
  double cap_sum = 0;
  uint32_t cap_cnt = 0;
  for ( auto const& c : lib.cells )
  {
    for ( auto const& p : c.pins )
    {
      if ( !p.is_output )
      {
        cap_sum += p.cap_ff;
        ++cap_cnt;
      }
    }
  }
  t.default_load_ff = cap_cnt ? params.gain * cap_sum / cap_cnt : 0.0;

  for ( auto const& c : lib.cells )
  {
    double load0 = params.gain * c.avg_input_cap();
    for ( auto const& a : c.arcs )
    {
      compiled_arc ca;
      ca.intrinsic_ps = a.table.eval( params.slew_ps, load0 );
      double lo_axis = a.table.load_axis.front();
      double hi_axis = a.table.load_axis.back();
      double h = std::max( 1e-6, 0.01 * ( hi_axis - lo_axis ) );
      double lo = std::max( lo_axis, std::min( load0 - h, hi_axis ) );
      double hi = std::min( hi_axis, std::max( load0 + h, lo_axis ) );
      if ( hi > lo )
        ca.slope_ps_per_ff = std::max( 0.0, ( a.table.eval( params.slew_ps, hi ) - a.table.eval( params.slew_ps, lo ) ) / ( hi - lo ) );
      t.arcs[{ c.name, a.in_pin }] = ca;
    }
  }
  return t;
}

namespace techmap_detail
{

struct match_entry
{
  lib_cell_def const* cell{ nullptr };
  /* cell input pin i (declaration order) reads cut variable var[i],
     complemented when comp[i] is set */
  std::vector<uint32_t> var;
  std::vector<bool> comp;
};

/*! \brief Exact-table match index over all permutations and input
 *         polarities of every cell with at most `max_arity` inputs.
 */
class match_index
{
public:
  match_index( cell_library const& lib, uint32_t max_arity )
  {
    for ( auto const& c : lib.cells )
    {
      auto ins = c.inputs();
      uint32_t k = static_cast<uint32_t>( ins.size() );
      if ( k > max_arity || k > 4 )
        continue;
      uint64_t f = c.truth_table();
      auto const& perms = npn_detail::perms_of( k );
      for ( auto const& p : perms )
      {
        for ( uint32_t comp = 0; comp < ( 1u << k ); ++comp )
        {
          /* wire cell input i from variable p^-1(i): the wired cell
             computes g(x) = f(y), y[p[j]] = x_j ^ c_j */
          npn_transform t;
          t.k = static_cast<uint8_t>( k );
          std::copy( p.begin(), p.end(), t.perm.begin() );
          t.input_comp = static_cast<uint8_t>( comp );
          t.output_comp = false;
          uint64_t g = npn_apply( t, f );
          match_entry e;
          e.cell = &c;
          e.var.resize( k );
          e.comp.resize( k );
          for ( uint32_t j = 0; j < k; ++j )
          {
            e.var[p[j]] = j;
            e.comp[p[j]] = ( comp >> j ) & 1;
          }
          auto& bucket = table_[{ k, g }];
          bool dup = false;
          for ( auto const& have : bucket )
            dup |= have.cell == e.cell && have.var == e.var && have.comp == e.comp;
          if ( !dup )
            bucket.push_back( std::move( e ) );
        }
      }
    }
    /* deterministic order: cheaper cells first, then by name */
    for ( auto& [key, bucket] : table_ )
    {
      std::stable_sort( bucket.begin(), bucket.end(), []( match_entry const& a, match_entry const& b ) {
        if ( a.cell->area_ge != b.cell->area_ge )
          return a.cell->area_ge < b.cell->area_ge;
        return a.cell->name < b.cell->name;
      } );
    }
  }

  std::vector<match_entry> const* find( uint32_t k, uint64_t tt ) const
  {
    auto it = table_.find( { k, tt } );
    return it == table_.end() ? nullptr : &it->second;
  }

private:
  std::map<std::pair<uint32_t, uint64_t>, std::vector<match_entry>> table_;
};

} // namespace techmap_detail

/*! \brief Maps an AIG onto library cells, minimizing estimated arrival
 *         (area recovery on non-critical nodes when a delay target is
 *         given). The result is a netlist of LIB cells.
 *
 * \throws unmatchable_function when the library lacks an inverter or a
 *         2-input universal gate.
 */
inline netlist map_cells( aig const& g, aig_ports const& ports, cell_library const& lib,
                          compiled_timing const& timing, std::optional<double> delay_target = {} )
{
  uint32_t max_arity = 2;
  for ( auto const& c : lib.cells )
    max_arity = std::max( max_arity, static_cast<uint32_t>( c.inputs().size() ) );
  max_arity = std::min( max_arity, 4u );

  techmap_detail::match_index index( lib, max_arity );
  auto const* inv_matches = index.find( 1, 0x1 );
  if ( !inv_matches || inv_matches->empty() )
    throw unmatchable_function( "library has no inverter" );
  if ( !index.find( 2, 0x8 ) && !index.find( 2, 0x7 ) )
    throw unmatchable_function( "library has no 2-input universal gate" );
  auto const& inv = ( *inv_matches )[0];
  double inv_delay = timing.estimate( inv.cell->name, inv.cell->inputs()[0]->name );

  auto sets = enumerate_cuts( g, std::max( 2u, max_arity ), 8 );
  auto fanout = g.fanout_counts();

  struct impl_t
  {
    bool through_inverter{ false };
    techmap_detail::match_entry const* entry{ nullptr };
    std::vector<uint32_t> leaves; //!< entry input -> node id
    double arrival{ 0 };
    double flow{ 0 };
    bool valid{ false };
  };
  using solution_t = std::vector<std::array<impl_t, 2>>;

  double const inf = 1e300;

  /* DP over (node, phase); `required` constrains arrivals when present
     (area-recovery pass), with a fallback to the fastest candidate */
  auto solve = [&]( std::map<std::pair<uint32_t, uint32_t>, double> const* required, bool area_first ) {
    solution_t impls( g.num_nodes() );
    for ( uint32_t n = 1; n <= g.num_pis(); ++n )
    {
      impls[n][0].valid = true;
      impls[n][1].valid = true;
      impls[n][1].through_inverter = true;
      impls[n][1].arrival = inv_delay;
      impls[n][1].flow = inv.cell->area_ge;
    }

    for ( uint32_t n = g.num_pis() + 1; n < g.num_nodes(); ++n )
    {
      for ( uint32_t phase = 0; phase < 2; ++phase )
      {
        impl_t best, fastest;
        best.arrival = fastest.arrival = inf;
        best.flow = fastest.flow = inf;
        double req = inf;
        if ( required )
        {
          auto it = required->find( { n, phase } );
          if ( it != required->end() )
            req = it->second;
        }
        for ( auto const& c : sets[n].cuts )
        {
          if ( c.leaves.size() == 1 && c.leaves[0] == n )
            continue;
          uint64_t f = phase ? ( ~c.tt & cut_detail::tt_mask_k( c.size() ) ) : c.tt;
          auto [mtt, sup] = lms_detail::minimize_support( f, c.size() );
          if ( sup.empty() )
            continue; // constant cones are resolved at the outputs
          auto const* bucket = index.find( static_cast<uint32_t>( sup.size() ), mtt );
          if ( !bucket )
            continue;
          for ( auto const& e : *bucket )
          {
            impl_t cand;
            cand.entry = &e;
            cand.valid = true;
            cand.flow = e.cell->area_ge;
            auto ins = e.cell->inputs();
            bool ok = true;
            cand.leaves.resize( e.var.size() );
            for ( size_t i = 0; i < e.var.size(); ++i )
            {
              uint32_t leaf = c.leaves[sup[e.var[i]]];
              cand.leaves[i] = leaf;
              auto const& li = impls[leaf][e.comp[i] ? 1 : 0];
              if ( !li.valid )
              {
                ok = false;
                break;
              }
              cand.arrival = std::max( cand.arrival, li.arrival + timing.estimate( e.cell->name, ins[i]->name ) );
              cand.flow += li.flow / std::max( 1u, fanout[leaf] );
            }
            if ( !ok )
              continue;
            auto fast_key = std::make_pair( cand.arrival, cand.flow );
            if ( fast_key < std::make_pair( fastest.arrival, fastest.flow ) )
              fastest = cand;
            if ( area_first && cand.arrival > req + 1e-9 )
              continue;
            auto key = area_first ? std::make_pair( cand.flow, cand.arrival )
                                  : std::make_pair( cand.arrival, cand.flow );
            auto best_key = area_first ? std::make_pair( best.flow, best.arrival )
                                       : std::make_pair( best.arrival, best.flow );
            if ( key < best_key )
              best = std::move( cand );
          }
        }
        impls[n][phase] = best.valid ? std::move( best ) : std::move( fastest );
      }
      /* close phases through an inverter */
      auto relax = [&]( impl_t& dst, impl_t const& src ) {
        if ( !src.valid || src.through_inverter )
          return;
        double arr = src.arrival + inv_delay;
        double fl = src.flow + inv.cell->area_ge;
        if ( !dst.valid || std::make_pair( arr, fl ) < std::make_pair( dst.arrival, dst.flow ) )
        {
          dst = impl_t{};
          dst.valid = true;
          dst.through_inverter = true;
          dst.arrival = arr;
          dst.flow = fl;
        }
      };
      auto& pos = impls[n][0];
      auto& neg = impls[n][1];
      if ( pos.valid && ( !neg.valid || pos.arrival <= neg.arrival ) )
        relax( neg, pos );
      else if ( neg.valid )
        relax( pos, neg );
      if ( !pos.valid && !neg.valid )
        throw unmatchable_function( "no library match for node " + std::to_string( n ) );
    }
    return impls;
  };

  auto extract_cover = [&]( solution_t const& impls ) {
    std::set<std::pair<uint32_t, uint32_t>> realized;
    std::function<void( uint32_t, uint32_t )> require = [&]( uint32_t v, uint32_t phase ) {
      if ( v == 0 || realized.count( { v, phase } ) )
        return;
      realized.insert( { v, phase } );
      if ( g.is_pi( v ) )
        return;
      auto const& im = impls[v][phase];
      if ( im.through_inverter )
      {
        require( v, phase ^ 1 );
        return;
      }
      for ( size_t i = 0; i < im.leaves.size(); ++i )
        require( im.leaves[i], im.entry->comp[i] ? 1 : 0 );
    };
    for ( auto o : g.outputs() )
    {
      if ( lit_node( o ) != 0 )
        require( lit_node( o ), lit_comp( o ) ? 1 : 0 );
    }
    return realized;
  };

  auto cover_area = [&]( solution_t const& impls, std::set<std::pair<uint32_t, uint32_t>> const& realized ) {
    double a = 0;
    for ( auto const& [v, phase] : realized )
    {
      if ( g.is_pi( v ) )
      {
        if ( phase == 1 )
          a += inv.cell->area_ge;
        continue;
      }
      auto const& im = impls[v][phase];
      a += im.through_inverter ? inv.cell->area_ge : im.entry->cell->area_ge;
    }
    return a;
  };

  auto worst_arrival = [&]( solution_t const& impls ) {
    double worst = 0;
    for ( auto o : g.outputs() )
    {
      if ( lit_node( o ) != 0 )
        worst = std::max( worst, impls[lit_node( o )][lit_comp( o ) ? 1 : 0].arrival );
    }
    return worst;
  };

  solution_t impls = solve( nullptr, false );
  auto realized = extract_cover( impls );

  if ( delay_target )
  {
    /* required times over the delay-optimal cover, then an area pass */
    double base_arrival = worst_arrival( impls );
    double target = std::max( *delay_target, base_arrival );
    std::map<std::pair<uint32_t, uint32_t>, double> required;
    for ( auto o : g.outputs() )
    {
      if ( lit_node( o ) != 0 )
      {
        auto key = std::make_pair( lit_node( o ), lit_comp( o ) ? 1u : 0u );
        auto it = required.find( key );
        required[key] = it == required.end() ? target : std::min( it->second, target );
      }
    }
    /* reverse order: realized pairs sorted descending by node id */
    std::vector<std::pair<uint32_t, uint32_t>> order( realized.begin(), realized.end() );
    std::sort( order.begin(), order.end(), std::greater<>() );
    for ( auto const& [v, phase] : order )
    {
      if ( g.is_pi( v ) )
        continue;
      auto it = required.find( { v, phase } );
      double req = it == required.end() ? target : it->second;
      auto const& im = impls[v][phase];
      if ( im.through_inverter )
      {
        auto key = std::make_pair( v, phase ^ 1 );
        auto jt = required.find( key );
        double nreq = req - inv_delay;
        required[key] = jt == required.end() ? nreq : std::min( jt->second, nreq );
      }
      else
      {
        auto ins = im.entry->cell->inputs();
        for ( size_t i = 0; i < im.leaves.size(); ++i )
        {
          auto key = std::make_pair( im.leaves[i], im.entry->comp[i] ? 1u : 0u );
          double nreq = req - timing.estimate( im.entry->cell->name, ins[i]->name );
          auto jt = required.find( key );
          required[key] = jt == required.end() ? nreq : std::min( jt->second, nreq );
        }
      }
    }
    solution_t area_impls = solve( &required, true );
    auto area_realized = extract_cover( area_impls );
    bool better_area = cover_area( area_impls, area_realized ) <= cover_area( impls, realized );
    bool meets = worst_arrival( area_impls ) <= target + 1e-9;
    if ( better_area && meets )
    {
      impls = std::move( area_impls );
      realized = std::move( area_realized );
    }
  }

  /* netlist emission */
  netlist out;
  out.name = ports.module_name;
  std::map<std::string, net_id> port_net;
  for ( auto const& [name, w] : ports.inputs )
    port_net[name] = out.add_port( name, port_dir::in, w );
  for ( auto const& [name, w] : ports.outputs )
    port_net[name] = out.add_port( name, port_dir::out, w );

  std::map<uint32_t, bit_ref> pi_bit;
  std::vector<net_id> dff_q_nets;
  {
    uint32_t pi = 1;
    for ( auto const& [name, w] : ports.inputs )
    {
      for ( uint32_t i = 0; i < w; ++i )
        pi_bit[pi++] = bit_ref::of_net( port_net.at( name ), i );
    }
    for ( auto const& d : ports.dffs )
    {
      net_id q = out.add_net( out.fresh_net_name( "q__" + d.inst ), 1 );
      dff_q_nets.push_back( q );
      pi_bit[pi++] = bit_ref::of_net( q, 0 );
    }
  }

  uint32_t serial = 0;
  std::map<std::pair<uint32_t, uint32_t>, bit_ref> phase_bit;
  std::map<std::pair<net_id, uint32_t>, cell_id> driver_of; // generated nets only

  auto new_lib_cell = [&]( std::string const& lib_cell ) {
    cell c;
    c.kind = cell_kind::LIB;
    c.lib_cell = lib_cell;
    c.name = "u" + std::to_string( serial++ );
    return c;
  };

  /* realized pairs in ascending node order; leaves are always ready */
  for ( auto const& [v, phase] : realized )
  {
    if ( g.is_pi( v ) && phase == 0 )
      phase_bit[{ v, 0 }] = pi_bit.at( v );
  }
  for ( auto const& [v, phase] : realized )
  {
    if ( g.is_pi( v ) && phase == 0 )
      continue;
    net_id o = out.add_net( out.fresh_net_name( "m" + std::to_string( v ) + ( phase ? "n" : "p" ) ), 1 );
    phase_bit[{ v, phase }] = bit_ref::of_net( o, 0 );
  }
  for ( auto const& [v, phase] : realized )
  {
    if ( g.is_pi( v ) && phase == 0 )
      continue;
    bit_ref target = phase_bit.at( { v, phase } );
    cell c;
    if ( g.is_pi( v ) || impls[v][phase].through_inverter )
    {
      c = new_lib_cell( inv.cell->name );
      bit_ref src = g.is_pi( v ) ? pi_bit.at( v ) : phase_bit.at( { v, phase ^ 1 } );
      c.pins[inv.cell->inputs()[0]->name] = signal_ref::of_bit( src );
    }
    else
    {
      auto const& im = impls[v][phase];
      c = new_lib_cell( im.entry->cell->name );
      auto ins = im.entry->cell->inputs();
      for ( size_t i = 0; i < im.leaves.size(); ++i )
        c.pins[ins[i]->name] = signal_ref::of_bit( phase_bit.at( { im.leaves[i], im.entry->comp[i] ? 1u : 0u } ) );
    }
    c.pins["Y"] = signal_ref::of_bit( target );
    cell_id cid = out.add_cell( std::move( c ) );
    driver_of[{ target.net, target.index }] = cid;
  }

  /* port and register D drivers */
  auto const* buf_matches = index.find( 1, 0x2 );
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> source_uses;
  for ( auto o : g.outputs() )
  {
    if ( lit_node( o ) != 0 )
      ++source_uses[{ lit_node( o ), lit_comp( o ) ? 1u : 0u }];
  }
  /* cell readers of each realized net keep retargeting honest */
  std::map<std::pair<net_id, uint32_t>, uint32_t> readers;
  for ( auto const& [cid, c] : out.cells )
  {
    for ( auto const& [pin, sr] : c.pins )
    {
      if ( pin == "Y" )
        continue;
      for ( auto b : sr.bits() )
        if ( !b.is_const )
          ++readers[{ b.net, b.index }];
    }
  }

  auto drive = [&]( bit_ref target, aig_lit l ) {
    if ( lit_node( l ) == 0 )
    {
      auto c = new_lib_cell( inv.cell->name );
      c.pins[inv.cell->inputs()[0]->name] = signal_ref::constant( { !lit_comp( l ) } );
      c.pins["Y"] = signal_ref::of_bit( target );
      out.add_cell( std::move( c ) );
      return;
    }
    auto key = std::make_pair( lit_node( l ), lit_comp( l ) ? 1u : 0u );
    bit_ref src = phase_bit.at( key );
    auto drv = driver_of.find( { src.net, src.index } );
    if ( drv != driver_of.end() && readers[{ src.net, src.index }] == 0 && source_uses[key] == 1 )
    {
      /* retarget the sole-use driver straight onto the port bit */
      out.cells.at( drv->second ).pins["Y"] = signal_ref::of_bit( target );
      driver_of.erase( drv );
      phase_bit[key] = target;
      return;
    }
    if ( buf_matches && !buf_matches->empty() )
    {
      auto const& bm = ( *buf_matches )[0];
      auto c = new_lib_cell( bm.cell->name );
      c.pins[bm.cell->inputs()[0]->name] = signal_ref::of_bit( src );
      c.pins["Y"] = signal_ref::of_bit( target );
      out.add_cell( std::move( c ) );
      return;
    }
    /* inverter pair */
    net_id mid = out.add_net( out.fresh_net_name( "po_inv" ), 1 );
    auto c1 = new_lib_cell( inv.cell->name );
    c1.pins[inv.cell->inputs()[0]->name] = signal_ref::of_bit( src );
    c1.pins["Y"] = signal_ref::whole( mid, 1 );
    out.add_cell( std::move( c1 ) );
    auto c2 = new_lib_cell( inv.cell->name );
    c2.pins[inv.cell->inputs()[0]->name] = signal_ref::whole( mid, 1 );
    c2.pins["Y"] = signal_ref::of_bit( target );
    out.add_cell( std::move( c2 ) );
  };

  uint32_t po = 0;
  for ( auto const& [name, w] : ports.outputs )
  {
    for ( uint32_t i = 0; i < w; ++i )
      drive( bit_ref::of_net( port_net.at( name ), i ), g.outputs()[po++] );
  }
  for ( size_t d = 0; d < ports.dffs.size(); ++d )
  {
    auto const& rec = ports.dffs[d];
    net_id dnet = out.add_net( out.fresh_net_name( "d__" + rec.inst ), 1 );
    drive( bit_ref::of_net( dnet, 0 ), g.outputs()[po++] );
    cell ff;
    ff.kind = cell_kind::DFF;
    ff.name = rec.inst;
    ff.pins["D"] = signal_ref::whole( dnet, 1 );
    if ( rec.clk_port.empty() )
      ff.pins["CLK"] = signal_ref::constant( { rec.clk_const_value } );
    else
      ff.pins["CLK"] = signal_ref{ slice{ port_net.at( rec.clk_port ), rec.clk_index, rec.clk_index } };
    ff.pins["Q"] = signal_ref::whole( dff_q_nets[d], 1 );
    out.add_cell( std::move( ff ) );
  }
  remove_unused_nets( out );
  return out;
}

} // namespace synkit
