/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include <synkit/cuts.hpp>
#include <synkit/equiv.hpp>
#include <synkit/npn.hpp>
#include <synkit/snl.hpp>

#include "random_fixtures.hpp"

using namespace synkit;

namespace
{

/* independent cone oracle: evaluate the cone once per leaf assignment by
   plain recursion, no word-parallel tricks */
bool eval_cone( aig const& g, uint32_t v, std::map<uint32_t, bool> const& leaf_val )
{
  auto it = leaf_val.find( v );
  if ( it != leaf_val.end() )
    return it->second;
  if ( v == 0 )
    return false;
  auto const& nd = g.at( v );
  bool a = eval_cone( g, lit_node( nd.fan0 ), leaf_val ) ^ lit_comp( nd.fan0 );
  bool b = eval_cone( g, lit_node( nd.fan1 ), leaf_val ) ^ lit_comp( nd.fan1 );
  return a && b;
}

uint64_t oracle_cut_truth( aig const& g, uint32_t root, std::vector<uint32_t> const& leaves )
{
  uint64_t tt = 0;
  for ( uint32_t m = 0; m < ( 1u << leaves.size() ); ++m )
  {
    std::map<uint32_t, bool> lv;
    for ( size_t i = 0; i < leaves.size(); ++i )
      lv[leaves[i]] = ( m >> i ) & 1;
    if ( eval_cone( g, root, lv ) )
      tt |= uint64_t( 1 ) << m;
  }
  return tt;
}

} // namespace

TEST_CASE( "strash: XOR decomposes into three ANDs" )
{
  auto n = parse_netlist( "module t\ninput a[1]\ninput b[1]\noutput y[1]\ncell XOR g .A(a) .B(b) .Y(y)\nend\n" );
  auto r = strash( n );
  CHECK( r.g.num_ands() == 3 );
}

TEST_CASE( "strash: idempotent AND and duplicate sharing" )
{
  auto n = parse_netlist( "module t\ninput a[1]\ninput b[1]\noutput y[1]\noutput z[1]\n"
                          "cell AND g0 .A(a) .B(a) .Y(y)\n"
                          "cell AND g1 .A(a) .B(b) .Y(z)\nend\n" );
  auto r = strash( n );
  CHECK( r.g.num_ands() == 1 ); // AND(a,a) folds to a; one real node remains
  auto n2 = parse_netlist( "module t\ninput a[1]\ninput b[1]\noutput y[1]\noutput z[1]\n"
                           "cell AND g0 .A(a) .B(b) .Y(y)\n"
                           "cell AND g1 .A(a) .B(b) .Y(z)\nend\n" );
  auto r2 = strash( n2 );
  CHECK( r2.g.num_ands() == 1 ); // structural hashing shares the pair
}

TEST_CASE( "strash: word-level cells are rejected" )
{
  auto n = parse_netlist( "module t\ninput a[2]\ninput b[2]\noutput y[3]\n"
                          "cell ADD g WA=2 WB=2 WY=3 .A(a) .B(b) .Y(y)\nend\n" );
  CHECK_THROWS_AS( strash( n ), unmapped_cell );
}

TEST_CASE( "strash round-trips through aig_to_netlist" )
{
  std::mt19937_64 rng( 2024 );
  for ( int iter = 0; iter < 20; ++iter )
  {
    auto n = synkit_test::random_netlist( rng, /*word_cells=*/false );
    REQUIRE( validate( n ).empty() );
    auto r = strash( n );
    auto back = aig_to_netlist( r.g, r.ports );
    REQUIRE( validate( back ).empty() );
    auto v = check_equiv( n, back, equiv_mode::exhaustive( 16 ) );
    INFO( write_netlist( n ) );
    CHECK( v.equivalent() );
  }
}

TEST_CASE( "strash keeps registers at the boundary" )
{
  auto n = parse_netlist( "module t\ninput clk[1]\ninput a[1]\noutput y[1]\nwire q[1]\nwire d[1]\n"
                          "cell XOR g .A(a) .B(q) .Y(d)\n"
                          "cell DFF ff .D(d) .CLK(clk) .Q(q)\n"
                          "cell BUF ob .A(q) .Y(y)\nend\n" );
  auto r = strash( n );
  CHECK( r.ports.dffs.size() == 1 );
  auto back = aig_to_netlist( r.g, r.ports );
  CHECK( stats( back ).count( cell_kind::DFF ) == 1 );
  auto v = check_equiv( n, back, equiv_mode::exhaustive( 16 ) );
  CHECK( v.equivalent() );
}

TEST_CASE( "enumerate_cuts: single AND has its trivial and leaf cuts" )
{
  aig g;
  auto a = g.add_pi();
  auto b = g.add_pi();
  auto y = g.and_( make_lit( a, false ), make_lit( b, false ) );
  g.add_output( y );
  auto sets = enumerate_cuts( g, 4, 8 );
  auto const& cs = sets[lit_node( y )].cuts;
  REQUIRE( cs.size() == 2 );
  CHECK( cs[0].leaves == std::vector<uint32_t>{ a, b } );
  CHECK( cs[0].tt == 0x8 );
  CHECK( cs[1].leaves == std::vector<uint32_t>{ lit_node( y ) } );
}

TEST_CASE( "enumerate_cuts: chain of three ANDs reaches all four leaves" )
{
  aig g;
  std::vector<uint32_t> pis;
  for ( int i = 0; i < 4; ++i )
    pis.push_back( g.add_pi() );
  auto n1 = g.and_( make_lit( pis[0], false ), make_lit( pis[1], false ) );
  auto n2 = g.and_( n1, make_lit( pis[2], false ) );
  auto n3 = g.and_( n2, make_lit( pis[3], false ) );
  g.add_output( n3 );
  auto sets = enumerate_cuts( g, 6, 8 );
  bool found = false;
  for ( auto const& c : sets[lit_node( n3 )].cuts )
    found |= c.leaves == pis;
  CHECK( found );

  /* K=2 keeps 3-leaf cones out */
  auto sets2 = enumerate_cuts( g, 2, 8 );
  for ( auto const& c : sets2[lit_node( n3 )].cuts )
    CHECK( c.leaves.size() <= 2 );
}

TEST_CASE( "cut_truth: AND and XOR shapes" )
{
  aig g;
  auto a = g.add_pi();
  auto b = g.add_pi();
  auto y_and = g.and_( make_lit( a, false ), make_lit( b, false ) );
  auto y_xor = g.xor_( make_lit( a, false ), make_lit( b, false ) );
  CHECK( cut_truth( g, lit_node( y_and ), { a, b } ) == 0x8 );
  uint64_t xt = cut_truth( g, lit_node( y_xor ), { a, b } );
  CHECK( ( lit_comp( y_xor ) ? ~xt & 0xf : xt ) == 0x6 );
}

TEST_CASE( "cut_truth matches the brute-force cone oracle" )
{
  std::mt19937_64 rng( 5 );
  aig g;
  std::vector<uint32_t> pis;
  for ( int i = 0; i < 5; ++i )
    pis.push_back( g.add_pi() );
  std::vector<aig_lit> pool;
  for ( auto p : pis )
    pool.push_back( make_lit( p, false ) );
  for ( int i = 0; i < 40; ++i )
  {
    auto a = pool[rng() % pool.size()];
    auto b = pool[rng() % pool.size()];
    if ( rng() & 1 )
      a = lit_not( a );
    if ( rng() & 1 )
      b = lit_not( b );
    pool.push_back( g.and_( a, b ) );
  }
  g.add_output( pool.back() );
  auto sets = enumerate_cuts( g, 5, 8 );
  for ( uint32_t n = g.num_pis() + 1; n < g.num_nodes(); ++n )
  {
    for ( auto const& c : sets[n].cuts )
    {
      INFO( "node " << n );
      CHECK( cut_truth( g, n, c.leaves ) == oracle_cut_truth( g, n, c.leaves ) );
      CHECK( c.tt == oracle_cut_truth( g, n, c.leaves ) );
    }
  }
}

TEST_CASE( "npn: AND and NOR share a class" )
{
  auto and_c = npn_canon( 0x8, 2 );
  auto nor_c = npn_canon( 0x1, 2 );
  CHECK( and_c.canonical == nor_c.canonical );
}

TEST_CASE( "npn: transform application and inverse round-trip" )
{
  std::mt19937_64 rng( 77 );
  for ( uint32_t k = 1; k <= 6; ++k )
  {
    for ( int iter = 0; iter < 200; ++iter )
    {
      uint64_t mask = k >= 6 ? ~uint64_t( 0 ) : ( ( uint64_t( 1 ) << ( 1u << k ) ) - 1 );
      uint64_t tt = rng() & mask;
      auto r = npn_canon( tt, k );
      CHECK( npn_apply( r.transform, tt ) == r.canonical );
      CHECK( npn_apply_inverse( r.transform, r.canonical ) == tt );
    }
  }
}

TEST_CASE( "npn: canonicalizer is idempotent" )
{
  std::mt19937_64 rng( 13 );
  for ( uint32_t k : { 3u, 4u, 5u, 6u } )
  {
    for ( int iter = 0; iter < 300; ++iter )
    {
      uint64_t mask = k >= 6 ? ~uint64_t( 0 ) : ( ( uint64_t( 1 ) << ( 1u << k ) ) - 1 );
      uint64_t tt = rng() & mask;
      auto once = npn_canon( tt, k ).canonical;
      auto twice = npn_canon( once, k ).canonical;
      CHECK( once == twice );
    }
  }
}

TEST_CASE( "npn: three-input functions form 14 classes" )
{
  std::set<uint64_t> classes;
  for ( uint32_t tt = 0; tt < 256; ++tt )
    classes.insert( npn_canon( tt, 3 ).canonical );
  CHECK( classes.size() == 14 );
}
