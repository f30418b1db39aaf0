/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file random_fixtures.hpp
  \brief Seeded random fixtures shared by the unit and acceptance suites
*/

#pragma once

#include <random>
#include <string>
#include <vector>

#include <synkit/cell_library.hpp>
#include <synkit/netlist.hpp>

namespace synkit_test
{

using namespace synkit;

/*! \brief Random combinational netlist with generic gates and occasional
 *         word-level cells, valid by construction.
 */
inline netlist random_netlist( std::mt19937_64& rng, bool word_cells = true )
{
  netlist n;
  n.name = "rnd" + std::to_string( rng() % 1000 );
  uint32_t nin = 2 + rng() % 4;
  std::vector<bit_ref> pool;
  for ( uint32_t i = 0; i < nin; ++i )
  {
    uint32_t w = 1 + rng() % 4;
    net_id id = n.add_port( "i" + std::to_string( i ), port_dir::in, w );
    for ( uint32_t b = 0; b < w; ++b )
      pool.push_back( bit_ref::of_net( id, b ) );
  }
  uint32_t ngates = 3 + rng() % 12;
  std::vector<bit_ref> sinks;
  for ( uint32_t g = 0; g < ngates; ++g )
  {
    static const cell_kind kinds[] = { cell_kind::NOT_, cell_kind::BUF, cell_kind::AND_, cell_kind::OR_,
                                       cell_kind::XOR_, cell_kind::NAND, cell_kind::NOR_, cell_kind::XNOR,
                                       cell_kind::MUX };
    cell_kind k = kinds[rng() % 9];
    net_id o = n.add_net( "n" + std::to_string( g ), 1 );
    cell c;
    c.kind = k;
    c.name = "g" + std::to_string( g );
    auto pick = [&]() {
      if ( rng() % 8 == 0 )
        return bit_ref::constant( rng() % 2 == 1 );
      return pool[rng() % pool.size()];
    };
    c.pins["A"] = signal_ref::of_bit( pick() );
    if ( k != cell_kind::NOT_ && k != cell_kind::BUF )
      c.pins["B"] = signal_ref::of_bit( pick() );
    if ( k == cell_kind::MUX )
      c.pins["S"] = signal_ref::of_bit( pick() );
    c.pins["Y"] = signal_ref::whole( o, 1 );
    n.add_cell( std::move( c ) );
    pool.push_back( bit_ref::of_net( o, 0 ) );
    sinks.push_back( bit_ref::of_net( o, 0 ) );
  }
  if ( word_cells && rng() % 2 == 0 )
  {
    uint32_t wa = 2 + rng() % 3, wb = 2 + rng() % 3;
    uint32_t wy = wa + wb;
    net_id a = n.add_net( "wa", wa ), b = n.add_net( "wb", wb ), y = n.add_net( "wy", wy );
    for ( uint32_t i = 0; i < wa; ++i )
    {
      cell bc;
      bc.kind = cell_kind::BUF;
      bc.name = "pa" + std::to_string( i );
      bc.pins["A"] = signal_ref::of_bit( pool[rng() % pool.size()] );
      bc.pins["Y"] = signal_ref{ slice{ a, i, i } };
      n.add_cell( std::move( bc ) );
    }
    for ( uint32_t i = 0; i < wb; ++i )
    {
      cell bc;
      bc.kind = cell_kind::BUF;
      bc.name = "pb" + std::to_string( i );
      bc.pins["A"] = signal_ref::of_bit( pool[rng() % pool.size()] );
      bc.pins["Y"] = signal_ref{ slice{ b, i, i } };
      n.add_cell( std::move( bc ) );
    }
    cell mc;
    mc.kind = cell_kind::MUL;
    mc.name = "wmul";
    mc.params = { { "WA", wa }, { "WB", wb }, { "WY", wy } };
    mc.pins["A"] = signal_ref::whole( a, wa );
    mc.pins["B"] = signal_ref::whole( b, wb );
    mc.pins["Y"] = signal_ref::whole( y, wy );
    n.add_cell( std::move( mc ) );
    for ( uint32_t i = 0; i < wy; ++i )
      sinks.push_back( bit_ref::of_net( y, i ) );
  }
  uint32_t nout = 1 + rng() % 3;
  for ( uint32_t i = 0; i < nout && !sinks.empty(); ++i )
  {
    net_id o = n.add_port( "o" + std::to_string( i ), port_dir::out, 1 );
    cell c;
    c.kind = cell_kind::BUF;
    c.name = "ob" + std::to_string( i );
    c.pins["A"] = signal_ref::of_bit( sinks[rng() % sinks.size()] );
    c.pins["Y"] = signal_ref::whole( o, 1 );
    n.add_cell( std::move( c ) );
  }
  /* every gate output must be read somewhere or it is fine to dangle
     (unread bits carry no obligations); ensure at least one output */
  return n;
}

/*! \brief Random cell library with 1-2 input cells and monotone tables. */
inline cell_library random_library( std::mt19937_64& rng )
{
  cell_library lib;
  lib.name = "rndlib" + std::to_string( rng() % 1000 );
  uint32_t ncells = 2 + rng() % 5;
  for ( uint32_t i = 0; i < ncells; ++i )
  {
    lib_cell_def def;
    def.name = "C" + std::to_string( i );
    def.area_ge = 0.5 + ( rng() % 40 ) / 8.0;
    uint32_t nin = 1 + rng() % 2;
    for ( uint32_t p = 0; p < nin; ++p )
      def.pins.push_back( lib_pin{ std::string( 1, static_cast<char>( 'A' + p ) ), false, 0.5 + ( rng() % 10 ) / 4.0 } );
    def.pins.push_back( lib_pin{ "Y", true, 0.0 } );
    auto a = bool_expr::make_var( "A" );
    if ( nin == 1 )
    {
      def.function = rng() % 2 ? bool_expr::make( bool_expr::op_t::not_, a ) : a;
    }
    else
    {
      auto b = bool_expr::make_var( "B" );
      auto ops = { bool_expr::op_t::and_, bool_expr::op_t::or_, bool_expr::op_t::xor_ };
      auto op = *( ops.begin() + rng() % 3 );
      auto e = bool_expr::make( op, a, b );
      def.function = rng() % 2 ? bool_expr::make( bool_expr::op_t::not_, e ) : e;
    }
    for ( auto const& p : def.pins )
    {
      if ( p.is_output )
        continue;
      timing_arc arc;
      arc.in_pin = p.name;
      arc.out_pin = "Y";
      arc.table.slew_axis = { 5.0, 20.0, 80.0 };
      arc.table.load_axis = { 1.0, 8.0, 32.0 };
      double base = 20 + rng() % 60;
      for ( int r = 0; r < 3; ++r )
      {
        std::vector<double> row;
        for ( int c = 0; c < 3; ++c )
          row.push_back( base + r * ( 2 + static_cast<double>( rng() % 8 ) ) + c * ( 1 + static_cast<double>( rng() % 12 ) ) );
        arc.table.values.push_back( row );
      }
      def.arcs.push_back( std::move( arc ) );
    }
    lib.cells.push_back( std::move( def ) );
  }
  return lib;
}

} // namespace synkit_test
