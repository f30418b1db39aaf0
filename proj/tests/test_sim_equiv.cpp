/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

#include <catch2/catch_amalgamated.hpp>

#include <synkit/equiv.hpp>
#include <synkit/snl.hpp>

using namespace synkit;

namespace
{

std::vector<bool> bits_of( uint64_t v, uint32_t w )
{
  std::vector<bool> b( w );
  for ( uint32_t i = 0; i < w; ++i )
    b[i] = ( v >> i ) & 1;
  return b;
}

uint64_t value_of( std::vector<bool> const& b )
{
  uint64_t v = 0;
  for ( size_t i = 0; i < b.size(); ++i )
    if ( b[i] )
      v |= uint64_t( 1 ) << i;
  return v;
}

} // namespace

TEST_CASE( "simulate: NOT gate" )
{
  auto n = parse_netlist( "module t\ninput a[1]\noutput y[1]\ncell NOT n0 .A(a) .Y(y)\nend\n" );
  sim_vector v;
  v.values["a"] = { true };
  auto out = simulate( n, v );
  CHECK( out.at( "y" )[0] == false );
}

TEST_CASE( "simulate: MACC reference semantics" )
{
  auto n = parse_netlist( "module t\ninput a[4]\ninput b[4]\ninput c[4]\ninput d[4]\noutput y[10]\n"
                          "cell MACC m WA=4 WB=4 WC=4 WD=4 WY=10 .A(a) .B(b) .C(c) .D(d) .Y(y)\nend\n" );
  sim_vector v;
  v.values["a"] = bits_of( 3, 4 );
  v.values["b"] = bits_of( 5, 4 );
  v.values["c"] = bits_of( 7, 4 );
  v.values["d"] = bits_of( 1, 4 );
  auto out = simulate( n, v );
  CHECK( value_of( out.at( "y" ) ) == 23 ); // 3*5 + 7 + 1
}

TEST_CASE( "simulate: SHIFTX out-of-range reads zero" )
{
  auto n = parse_netlist( "module t\ninput a[8]\ninput s[4]\noutput y[4]\n"
                          "cell SHIFTX sx WA=8 WS=4 WY=4 .A(a) .S(s) .Y(y)\nend\n" );
  sim_vector v;
  v.values["a"] = bits_of( 0xAB, 8 );
  v.values["s"] = bits_of( 4, 4 );
  CHECK( value_of( simulate( n, v ).at( "y" ) ) == 0xA ); // in range: bits [7:4]
  v.values["s"] = bits_of( 6, 4 );
  CHECK( value_of( simulate( n, v ).at( "y" ) ) == 0x2 ); // partial: bits [9:6] read 10_10 -> 0b0010
  v.values["s"] = bits_of( 8, 4 );
  CHECK( value_of( simulate( n, v ).at( "y" ) ) == 0 ); // fully out of range
}

TEST_CASE( "simulate: DFF Q acts as a primary input" )
{
  auto n = parse_netlist( "module t\ninput clk[1]\noutput y[1]\nwire q[1]\nwire d[1]\n"
                          "cell DFF ff .D(d) .CLK(clk) .Q(q)\n"
                          "cell NOT inv .A(q) .Y(d)\n"
                          "cell BUF ob .A(q) .Y(y)\nend\n" );
  sim_vector v;
  v.values["clk"] = { false };
  v.values["dffq__ff"] = { true };
  auto out = simulate( n, v );
  CHECK( out.at( "y" )[0] == true );
  CHECK( out.at( "dffd__ff" )[0] == false ); // next state = !q
}

TEST_CASE( "build_miter: identical designs never differ" )
{
  auto n = parse_netlist( "module t\ninput a[2]\noutput y[1]\ncell XOR g .A(a[0]) .B(a[1]) .Y(y)\nend\n" );
  auto m = build_miter( n, n );
  CHECK( validate( m ).empty() );
  for ( uint64_t x = 0; x < 4; ++x )
  {
    sim_vector v;
    v.values["a"] = bits_of( x, 2 );
    CHECK( simulate( m, v ).at( "DIFF" )[0] == false );
  }
}

TEST_CASE( "build_miter: BUF vs NOT differ everywhere" )
{
  auto a = parse_netlist( "module t\ninput a[1]\noutput y[1]\ncell BUF g .A(a) .Y(y)\nend\n" );
  auto b = parse_netlist( "module t\ninput a[1]\noutput y[1]\ncell NOT g .A(a) .Y(y)\nend\n" );
  auto m = build_miter( a, b );
  for ( bool x : { false, true } )
  {
    sim_vector v;
    v.values["a"] = { x };
    CHECK( simulate( m, v ).at( "DIFF" )[0] == true );
  }
}

TEST_CASE( "build_miter: signature mismatch raises" )
{
  auto a = parse_netlist( "module t\ninput a[1]\noutput y[1]\ncell BUF g .A(a) .Y(y)\nend\n" );
  auto b = parse_netlist( "module t\ninput b[1]\noutput y[1]\ncell BUF g .A(b) .Y(y)\nend\n" );
  CHECK_THROWS_AS( build_miter( a, b ), signature_mismatch );
}

TEST_CASE( "check_equiv: identical netlists equivalent, budget rule" )
{
  auto n = parse_netlist( "module t\ninput a[8]\ninput b[8]\noutput y[9]\n"
                          "cell ADD g WA=8 WB=8 WY=9 .A(a) .B(b) .Y(y)\nend\n" );
  auto v = check_equiv( n, n, equiv_mode::exhaustive( 16 ) );
  CHECK( v.equivalent() );
  CHECK( v.vectors_tried == 65536 );

  auto wide = parse_netlist( "module t\ninput a[10]\ninput b[10]\noutput y[11]\n"
                             "cell ADD g WA=10 WB=10 WY=11 .A(a) .B(b) .Y(y)\nend\n" );
  auto v2 = check_equiv( wide, wide, equiv_mode::exhaustive( 16 ) );
  CHECK( v2.kind == equiv_verdict::kind_t::inconclusive );
}

TEST_CASE( "check_equiv: counterexample is found, minimal order, self-checked" )
{
  /* y = a&b vs y = a|b differ exactly on a!=b; first difference in vector
     order is a=1,b=0 (vector 1) */
  auto a = parse_netlist( "module t\ninput a[1]\ninput b[1]\noutput y[1]\ncell AND g .A(a) .B(b) .Y(y)\nend\n" );
  auto b = parse_netlist( "module t\ninput a[1]\ninput b[1]\noutput y[1]\ncell OR g .A(a) .B(b) .Y(y)\nend\n" );
  auto v = check_equiv( a, b, equiv_mode::exhaustive( 16 ) );
  REQUIRE( v.kind == equiv_verdict::kind_t::counterexample );
  REQUIRE( v.cex.has_value() );
  CHECK( v.differing_output == "y[0]" );
  bool av = v.cex->values.at( "a" )[0], bv = v.cex->values.at( "b" )[0];
  CHECK( av != bv );
  CHECK( v.vectors_tried == 2 ); // vectors 0b00 then 0b01
}

TEST_CASE( "check_equiv: random mode reproducible" )
{
  std::string src = "module t\ninput a[20]\noutput y[1]\nwire t0[1]\n"
                    "cell XOR g0 .A(a[0]) .B(a[19]) .Y(t0)\n"
                    "cell XOR g1 .A(t0) .B(a[7]) .Y(y)\nend\n";
  auto n1 = parse_netlist( src );
  std::string src2 = "module t\ninput a[20]\noutput y[1]\nwire t0[1]\n"
                     "cell XOR g0 .A(a[0]) .B(a[7]) .Y(t0)\n"
                     "cell XOR g1 .A(t0) .B(a[19]) .Y(y)\nend\n";
  auto n2 = parse_netlist( src2 );
  auto v1 = check_equiv( n1, n2, equiv_mode::random( 5000, 7 ) );
  auto v2 = check_equiv( n1, n2, equiv_mode::random( 5000, 7 ) );
  CHECK( v1.equivalent() );
  CHECK( v2.equivalent() );
  CHECK( v1.vectors_tried == v2.vectors_tried );

  /* an actually-different pair yields the same counterexample twice */
  std::string bad = "module t\ninput a[20]\noutput y[1]\nwire t0[1]\n"
                    "cell XOR g0 .A(a[0]) .B(a[7]) .Y(t0)\n"
                    "cell XNOR g1 .A(t0) .B(a[19]) .Y(y)\nend\n";
  auto n3 = parse_netlist( bad );
  auto c1 = check_equiv( n1, n3, equiv_mode::random( 100, 11 ) );
  auto c2 = check_equiv( n1, n3, equiv_mode::random( 100, 11 ) );
  REQUIRE( c1.kind == equiv_verdict::kind_t::counterexample );
  REQUIRE( c2.kind == equiv_verdict::kind_t::counterexample );
  CHECK( c1.cex->values == c2.cex->values );
  CHECK( c1.vectors_tried == c2.vectors_tried );
}

TEST_CASE( "check_equiv: constraint narrows the vector space" )
{
  /* designs agree iff idx < 2 */
  std::string base = "module t\ninput idx[2]\ninput a[4]\noutput y[1]\n"
                     "cell SHIFTX sx WA=4 WS=2 WY=1 .A(a) .S(idx) .Y(y)\nend\n";
  std::string other = "module t\ninput idx[2]\ninput a[4]\noutput y[1]\nwire n0[1]\n"
                      "cell MUX m0 .A(a[0]) .B(a[1]) .S(idx[0]) .Y(y)\nend\n";
  auto n1 = parse_netlist( base );
  auto n2 = parse_netlist( other );
  auto unconstrained = check_equiv( n1, n2, equiv_mode::exhaustive( 16 ) );
  CHECK( unconstrained.kind == equiv_verdict::kind_t::counterexample );
  auto cons = less_than_constraint( "idx", 2, 2 );
  auto constrained = check_equiv( n1, n2, equiv_mode::exhaustive( 16 ), &cons );
  CHECK( constrained.equivalent() );
}

TEST_CASE( "check_equiv: resampling cap yields inconclusive" )
{
  auto n = parse_netlist( "module t\ninput a[4]\noutput y[1]\nwire t0[1]\n"
                          "cell AND g0 .A(a[0]) .B(a[1]) .Y(t0)\ncell AND g1 .A(t0) .B(a[2]) .Y(y)\nend\n" );
  /* constraint that never holds: a < 0 */
  auto cons = less_than_constraint( "a", 4, 0 );
  auto v = check_equiv( n, n, equiv_mode::random( 100, 3 ), &cons );
  CHECK( v.kind == equiv_verdict::kind_t::inconclusive );
}

TEST_CASE( "export_cnf: miter of inequivalent designs is satisfiable by hand" )
{
  auto a = parse_netlist( "module t\ninput a[1]\ninput b[1]\noutput y[1]\ncell AND g .A(a) .B(b) .Y(y)\nend\n" );
  auto b = parse_netlist( "module t\ninput a[1]\ninput b[1]\noutput y[1]\ncell OR g .A(a) .B(b) .Y(y)\nend\n" );
  auto m = build_miter( a, b );
  auto cnf = export_cnf( m );
  CHECK( cnf.find( "p cnf " ) != std::string::npos );
  CHECK( cnf.find( " 0\n" ) != std::string::npos );
  /* word-level cells are rejected */
  auto w = parse_netlist( "module t\ninput a[2]\ninput b[2]\noutput y[3]\n"
                          "cell ADD g WA=2 WB=2 WY=3 .A(a) .B(b) .Y(y)\nend\n" );
  CHECK_THROWS_AS( export_cnf( build_miter( w, w ) ), unmapped_cell );
}
