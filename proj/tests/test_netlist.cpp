/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <synkit/netlist.hpp>

using namespace synkit;

namespace
{

netlist buf_through()
{
  netlist n;
  n.name = "t";
  auto a = n.add_port( "a", port_dir::in, 1 );
  auto y = n.add_port( "y", port_dir::out, 1 );
  cell c;
  c.kind = cell_kind::BUF;
  c.name = "b0";
  c.pins["A"] = signal_ref::whole( a, 1 );
  c.pins["Y"] = signal_ref::whole( y, 1 );
  n.add_cell( std::move( c ) );
  return n;
}

} // namespace

TEST_CASE( "validate: minimal legal module" )
{
  auto n = buf_through();
  CHECK( validate( n ).empty() );
}

TEST_CASE( "validate: width mismatch on ADD output" )
{
  netlist n;
  n.name = "t";
  auto a = n.add_port( "a", port_dir::in, 4 );
  auto b = n.add_port( "b", port_dir::in, 4 );
  auto y = n.add_port( "y", port_dir::out, 5 );
  cell c;
  c.kind = cell_kind::ADD;
  c.name = "add0";
  c.params = { { "WA", 4 }, { "WB", 4 }, { "WY", 3 } };
  c.pins["A"] = signal_ref::whole( a, 4 );
  c.pins["B"] = signal_ref::whole( b, 4 );
  c.pins["Y"] = signal_ref::whole( y, 5 );
  n.add_cell( std::move( c ) );
  auto v = validate( n );
  bool found = false;
  for ( auto const& viol : v )
    found |= viol.rule == "width-mismatch";
  CHECK( found );
}

TEST_CASE( "validate: multiple drivers" )
{
  netlist n;
  n.name = "t";
  auto a = n.add_port( "a", port_dir::in, 1 );
  auto b = n.add_port( "b", port_dir::in, 1 );
  auto y = n.add_port( "y", port_dir::out, 1 );
  for ( int i = 0; i < 2; ++i )
  {
    cell c;
    c.kind = cell_kind::AND_;
    c.name = "g" + std::to_string( i );
    c.pins["A"] = signal_ref::whole( a, 1 );
    c.pins["B"] = signal_ref::whole( b, 1 );
    c.pins["Y"] = signal_ref::whole( y, 1 );
    n.add_cell( std::move( c ) );
  }
  auto v = validate( n );
  bool found = false;
  for ( auto const& viol : v )
    found |= viol.rule == "multiple-driver";
  CHECK( found );
}

TEST_CASE( "topo_order: chain of three buffers" )
{
  netlist n;
  n.name = "t";
  auto a = n.add_port( "a", port_dir::in, 1 );
  auto y = n.add_port( "y", port_dir::out, 1 );
  auto t1 = n.add_net( "t1", 1 );
  auto t2 = n.add_net( "t2", 1 );
  auto mk = [&]( std::string const& nm, net_id in, net_id out ) {
    cell c;
    c.kind = cell_kind::BUF;
    c.name = nm;
    c.pins["A"] = signal_ref::whole( in, 1 );
    c.pins["Y"] = signal_ref::whole( out, 1 );
    return n.add_cell( std::move( c ) );
  };
  /* add in reverse to make the order nontrivial */
  auto c3 = mk( "b3", t2, y );
  auto c2 = mk( "b2", t1, t2 );
  auto c1 = mk( "b1", a, t1 );
  auto order = topo_order( n );
  REQUIRE( order.size() == 3 );
  auto pos = [&]( cell_id c ) {
    return std::find( order.begin(), order.end(), c ) - order.begin();
  };
  CHECK( pos( c1 ) < pos( c2 ) );
  CHECK( pos( c2 ) < pos( c3 ) );
}

TEST_CASE( "topo_order: self-loop raises" )
{
  netlist n;
  n.name = "t";
  auto t = n.add_net( "t", 1 );
  auto y = n.add_port( "y", port_dir::out, 1 );
  cell c;
  c.kind = cell_kind::NOT_;
  c.name = "inv";
  c.pins["A"] = signal_ref::whole( t, 1 );
  c.pins["Y"] = signal_ref::whole( t, 1 );
  n.add_cell( std::move( c ) );
  cell b;
  b.kind = cell_kind::BUF;
  b.name = "b";
  b.pins["A"] = signal_ref::whole( t, 1 );
  b.pins["Y"] = signal_ref::whole( y, 1 );
  n.add_cell( std::move( b ) );
  CHECK_THROWS_AS( topo_order( n ), combinational_loop );
}

TEST_CASE( "topo_order: DFF breaks cycles" )
{
  netlist n;
  n.name = "t";
  auto clk = n.add_port( "clk", port_dir::in, 1 );
  auto y = n.add_port( "y", port_dir::out, 1 );
  auto q = n.add_net( "q", 1 );
  auto d = n.add_net( "d", 1 );
  cell inv;
  inv.kind = cell_kind::NOT_;
  inv.name = "inv";
  inv.pins["A"] = signal_ref::whole( q, 1 );
  inv.pins["Y"] = signal_ref::whole( d, 1 );
  n.add_cell( std::move( inv ) );
  cell ff;
  ff.kind = cell_kind::DFF;
  ff.name = "ff";
  ff.pins["D"] = signal_ref::whole( d, 1 );
  ff.pins["CLK"] = signal_ref::whole( clk, 1 );
  ff.pins["Q"] = signal_ref::whole( q, 1 );
  n.add_cell( std::move( ff ) );
  cell b;
  b.kind = cell_kind::BUF;
  b.name = "b";
  b.pins["A"] = signal_ref::whole( q, 1 );
  b.pins["Y"] = signal_ref::whole( y, 1 );
  n.add_cell( std::move( b ) );
  CHECK( validate( n ).empty() );
  CHECK( topo_order( n ).size() == 3 );
}

TEST_CASE( "topo_order respects all driver edges (direct edge scan)" )
{
  /* property: for every cell input bit driven by another cell, the driver
     appears earlier in the order */
  netlist n;
  n.name = "t";
  std::mt19937_64 rng( 7 );
  std::vector<net_id> pool;
  for ( int i = 0; i < 4; ++i )
    pool.push_back( n.add_port( "i" + std::to_string( i ), port_dir::in, 1 ) );
  for ( int g = 0; g < 30; ++g )
  {
    net_id o = n.add_net( "n" + std::to_string( g ), 1 );
    cell c;
    c.kind = cell_kind::AND_;
    c.name = "g" + std::to_string( g );
    c.pins["A"] = signal_ref::whole( pool[rng() % pool.size()], 1 );
    c.pins["B"] = signal_ref::whole( pool[rng() % pool.size()], 1 );
    c.pins["Y"] = signal_ref::whole( o, 1 );
    n.add_cell( std::move( c ) );
    pool.push_back( o );
  }
  auto y = n.add_port( "y", port_dir::out, 1 );
  cell b;
  b.kind = cell_kind::BUF;
  b.name = "ob";
  b.pins["A"] = signal_ref::whole( pool.back(), 1 );
  b.pins["Y"] = signal_ref::whole( y, 1 );
  n.add_cell( std::move( b ) );

  auto order = topo_order( n );
  CHECK( order.size() == n.cells.size() );
  std::map<cell_id, size_t> pos;
  for ( size_t i = 0; i < order.size(); ++i )
    pos[order[i]] = i;
  driver_map dm( n );
  for ( auto const& [cid, c] : n.cells )
  {
    std::vector<bit_ref> ins;
    for ( auto const& [pin, sr] : c.pins )
    {
      if ( pin == "Y" )
        continue;
      for ( auto bb : sr.bits() )
        ins.push_back( bb );
    }
    for ( auto const& bb : ins )
    {
      if ( bb.is_const )
        continue;
      auto const& drv = dm.at( bb.net, bb.index );
      if ( drv.kind == bit_driver::kind_t::cell_output )
        CHECK( pos.at( drv.cell ) < pos.at( cid ) );
    }
  }
}

TEST_CASE( "stats: per-kind counts and totals" )
{
  netlist n;
  n.name = "t";
  auto a = n.add_port( "a", port_dir::in, 1 );
  auto y = n.add_port( "y", port_dir::out, 4 );
  std::vector<net_id> ts;
  for ( int i = 0; i < 3; ++i )
  {
    net_id o = n.add_net( "t" + std::to_string( i ), 1 );
    cell c;
    c.kind = cell_kind::AND_;
    c.name = "a" + std::to_string( i );
    c.pins["A"] = signal_ref::whole( a, 1 );
    c.pins["B"] = signal_ref::whole( a, 1 );
    c.pins["Y"] = signal_ref::whole( o, 1 );
    n.add_cell( std::move( c ) );
    ts.push_back( o );
  }
  cell inv;
  inv.kind = cell_kind::NOT_;
  inv.name = "n0";
  inv.pins["A"] = signal_ref::whole( ts[0], 1 );
  inv.pins["Y"] = signal_ref{ slice{ y, 3, 3 } };
  n.add_cell( std::move( inv ) );
  for ( int i = 0; i < 3; ++i )
  {
    cell b;
    b.kind = cell_kind::BUF;
    b.name = "ob" + std::to_string( i );
    b.pins["A"] = signal_ref::whole( ts[i], 1 );
    b.pins["Y"] = signal_ref{ slice{ y, static_cast<uint32_t>( i ), static_cast<uint32_t>( i ) } };
    n.add_cell( std::move( b ) );
  }
  auto s = stats( n );
  CHECK( s.count( cell_kind::AND_ ) == 3 );
  CHECK( s.count( cell_kind::NOT_ ) == 1 );
  CHECK( s.count( cell_kind::BUF ) == 3 );
  CHECK( s.generic_gates == 7 );
  CHECK( s.total == n.cells.size() );
}

TEST_CASE( "stats: empty netlist" )
{
  netlist n;
  n.name = "empty";
  auto s = stats( n );
  CHECK( s.total == 0 );
  CHECK( s.generic_gates == 0 );
}
