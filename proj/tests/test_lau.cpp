/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <synkit/equiv.hpp>
#include <synkit/lau.hpp>
#include <synkit/snl.hpp>

using namespace synkit;
using boost::multiprecision::cpp_int;

namespace
{

/* maximal-reduction recurrence: r -> ceil(2r/3) until two rows remain */
uint32_t oracle_wallace_stages( uint32_t rows )
{
  uint32_t s = 0;
  while ( rows > 2 )
  {
    rows = ( 2 * rows + 2 ) / 3;
    ++s;
  }
  return s;
}

/* structural size/depth formulas for power-of-two widths */
uint32_t oracle_sklansky_ops( uint32_t n ) { return n / 2 * clog2( n ); }
uint32_t oracle_sklansky_depth( uint32_t n ) { return clog2( n ); }
uint32_t oracle_bk_ops( uint32_t n ) { return 2 * n - 2 - clog2( n ); }
uint32_t oracle_bk_depth( uint32_t n ) { return 2 * clog2( n ) - 2; }

/* ripple adder cell counts per the chosen full-adder decomposition:
   bit 0 is a half adder, each further bit costs 2 XOR + 2 AND + 1 OR */
std::map<cell_kind, uint32_t> oracle_ripple_counts( uint32_t w )
{
  return { { cell_kind::XOR_, 2 * w - 1 }, { cell_kind::AND_, 2 * w - 1 }, { cell_kind::OR_, w - 1 } };
}

netlist behavioral_binop( cell_kind k, uint32_t wa, uint32_t wb, uint32_t wy )
{
  netlist n;
  n.name = "beh";
  net_id a = n.add_port( "A", port_dir::in, wa );
  net_id b = n.add_port( "B", port_dir::in, wb );
  net_id y = n.add_port( "Y", port_dir::out, wy );
  cell c;
  c.kind = k;
  c.name = "op";
  c.params = { { "WA", wa }, { "WB", wb }, { "WY", wy } };
  c.pins["A"] = signal_ref::whole( a, wa );
  c.pins["B"] = signal_ref::whole( b, wb );
  c.pins["Y"] = signal_ref::whole( y, wy );
  n.add_cell( std::move( c ) );
  return n;
}

netlist behavioral_macc( uint32_t wa, uint32_t wb, uint32_t wc, uint32_t wd )
{
  netlist n;
  n.name = "beh";
  net_id a = n.add_port( "A", port_dir::in, wa );
  net_id b = n.add_port( "B", port_dir::in, wb );
  net_id c = n.add_port( "C", port_dir::in, wc );
  net_id d = n.add_port( "D", port_dir::in, wd );
  uint32_t wy = macc_width( wa, wb, wc, wd );
  net_id y = n.add_port( "Y", port_dir::out, wy );
  cell m;
  m.kind = cell_kind::MACC;
  m.name = "op";
  m.params = { { "WA", wa }, { "WB", wb }, { "WC", wc }, { "WD", wd }, { "WY", wy } };
  m.pins["A"] = signal_ref::whole( a, wa );
  m.pins["B"] = signal_ref::whole( b, wb );
  m.pins["C"] = signal_ref::whole( c, wc );
  m.pins["D"] = signal_ref::whole( d, wd );
  m.pins["Y"] = signal_ref::whole( y, wy );
  n.add_cell( std::move( m ) );
  return n;
}

/* column conservation: occupancy after a stage must equal leftovers plus
   sums plus incoming carries, allowing the drop at the top column */
bool conserved( compressor_tree const& tree, uint32_t width )
{
  for ( uint32_t s = 1; s < tree.column_counts.size(); ++s )
  {
    auto const& before = tree.column_counts[s - 1];
    auto const& after = tree.column_counts[s];
    std::vector<uint32_t> fa( width, 0 ), ha( width, 0 );
    for ( auto const& p : tree.placements )
    {
      if ( p.stage == s )
        ( p.full ? fa : ha )[p.column]++;
    }
    for ( uint32_t c = 0; c < width; ++c )
    {
      uint32_t consumed = 3 * fa[c] + 2 * ha[c];
      if ( consumed > before[c] )
        return false;
      uint32_t keep = before[c] - consumed;
      uint32_t carries_in = c > 0 ? fa[c - 1] + ha[c - 1] : 0;
      uint32_t expect = keep + fa[c] + ha[c] + carries_in;
      if ( after[c] != expect )
        return false;
    }
  }
  return true;
}

} // namespace

TEST_CASE( "wide_uint agrees with an independent bignum" )
{
  std::mt19937_64 rng( 99 );
  for ( int iter = 0; iter < 500; ++iter )
  {
    uint32_t w = 1 + rng() % 200;
    auto rand_wide = [&]( wide_uint& out, cpp_int& ref ) {
      out = wide_uint( w );
      ref = 0;
      for ( uint32_t i = 0; i < w; ++i )
      {
        bool bit = rng() & 1;
        out.set_bit( i, bit );
        if ( bit )
          ref += cpp_int( 1 ) << i;
      }
    };
    wide_uint a, b;
    cpp_int ra, rb;
    rand_wide( a, ra );
    rand_wide( b, rb );
    cpp_int mod = cpp_int( 1 ) << w;
    auto check = [&]( wide_uint const& got, cpp_int want ) {
      want = ( ( want % mod ) + mod ) % mod;
      for ( uint32_t i = 0; i < w; ++i )
      {
        bool wb = ( ( want >> i ) & 1 ) != 0;
        if ( got.bit( i ) != wb )
          return false;
      }
      return true;
    };
    CHECK( check( wide_uint::add( a, b, w ), ra + rb ) );
    CHECK( check( wide_uint::sub( a, b, w ), ra - rb ) );
    CHECK( check( wide_uint::mul( a, b, w ), ra * rb ) );
  }
}

TEST_CASE( "prefix networks: span consistency for widths 2..64" )
{
  for ( uint32_t w = 2; w <= 64; ++w )
  {
    for ( auto arch : { prefix_arch::ripple, prefix_arch::brent_kung, prefix_arch::sklansky } )
    {
      auto pn = prefix_network::build( w, arch );
      INFO( "arch " << to_string( arch ) << " width " << w );
      CHECK( pn.spans_consistent() );
    }
  }
}

TEST_CASE( "prefix networks: structural counts at powers of two" )
{
  for ( uint32_t n : { 8u, 16u, 32u, 64u } )
  {
    auto sk = prefix_network::build( n, prefix_arch::sklansky );
    CHECK( sk.op_count() == oracle_sklansky_ops( n ) );
    CHECK( sk.depth() == oracle_sklansky_depth( n ) );
    auto bk = prefix_network::build( n, prefix_arch::brent_kung );
    CHECK( bk.op_count() == oracle_bk_ops( n ) );
    CHECK( bk.depth() == oracle_bk_depth( n ) );
  }
}

TEST_CASE( "gen_adder: width 1 is a half adder" )
{
  for ( auto g : { speed_grade::small, speed_grade::medium, speed_grade::fast } )
  {
    auto n = gen_adder( 1, g );
    auto st = stats( n );
    CHECK( st.count( cell_kind::XOR_ ) == 1 );
    CHECK( st.count( cell_kind::AND_ ) == 1 );
    CHECK( st.total == 2 );
  }
}

TEST_CASE( "gen_adder: ripple cell counts at width 8" )
{
  auto n = gen_adder( 8, speed_grade::small );
  auto st = stats( n );
  auto want = oracle_ripple_counts( 8 );
  CHECK( st.count( cell_kind::XOR_ ) == want[cell_kind::XOR_] );
  CHECK( st.count( cell_kind::AND_ ) == want[cell_kind::AND_] );
  CHECK( st.count( cell_kind::OR_ ) == want[cell_kind::OR_] );
  CHECK( st.count( cell_kind::BUF ) == 0 );
}

TEST_CASE( "gen_adder: exhaustively correct up to 8 bits, all grades" )
{
  for ( uint32_t w : { 1u, 2u, 3u, 5u, 8u } )
  {
    for ( auto g : { speed_grade::small, speed_grade::medium, speed_grade::fast } )
    {
      auto n = gen_adder( w, g );
      REQUIRE( validate( n ).empty() );
      auto beh = behavioral_binop( cell_kind::ADD, w, w, w + 1 );
      auto v = check_equiv( n, beh, equiv_mode::exhaustive( 16 ) );
      INFO( "width " << w << " grade " << to_string( g ) );
      CHECK( v.equivalent() );
    }
  }
}

TEST_CASE( "gen_pp: row counts land on 54 and 28 at 53x53" )
{
  netlist scratch;
  scratch.name = "scr";
  net_id a = scratch.add_port( "A", port_dir::in, 53 );
  net_id b = scratch.add_port( "B", port_dir::in, 53 );
  gate_builder gb( scratch, "u" );
  auto none = gen_pp( gb, signal_ref::whole( a, 53 ).bits(), signal_ref::whole( b, 53 ).bits(),
                      pp_encoding::none, 106 );
  CHECK( none.rows.size() == 54 );
  auto booth = gen_pp( gb, signal_ref::whole( a, 53 ).bits(), signal_ref::whole( b, 53 ).bits(),
                       pp_encoding::booth_r4, 106 );
  CHECK( booth.rows.size() == 28 );
}

TEST_CASE( "gen_pp: booth row count formula for n in 2..64" )
{
  for ( uint32_t n = 2; n <= 64; n += 3 )
  {
    netlist scratch;
    scratch.name = "scr";
    net_id a = scratch.add_port( "A", port_dir::in, n );
    net_id b = scratch.add_port( "B", port_dir::in, n );
    gate_builder gb( scratch, "u" );
    auto booth = gen_pp( gb, signal_ref::whole( a, n ).bits(), signal_ref::whole( b, n ).bits(),
                         pp_encoding::booth_r4, 2 * n );
    CHECK( booth.rows.size() == ( n + 1 + 1 ) / 2 + 1 );
    auto none = gen_pp( gb, signal_ref::whole( a, n ).bits(), signal_ref::whole( b, n ).bits(),
                        pp_encoding::none, 2 * n );
    CHECK( none.rows.size() == n + 1 );
  }
}

TEST_CASE( "gen_pp: row sums equal the product (exhaustive small widths)" )
{
  for ( auto enc : { pp_encoding::none, pp_encoding::booth_r4 } )
  {
    for ( auto [wa, wb] : { std::pair<uint32_t, uint32_t>{ 2, 2 }, { 3, 2 }, { 3, 3 }, { 4, 3 } } )
    {
      uint32_t w = wa + wb;
      netlist n;
      n.name = "pp";
      net_id a = n.add_port( "A", port_dir::in, wa );
      net_id b = n.add_port( "B", port_dir::in, wb );
      gate_builder gb( n, "u" );
      auto pp = gen_pp( gb, signal_ref::whole( a, wa ).bits(), signal_ref::whole( b, wb ).bits(), enc, w );
      std::vector<net_id> row_ports;
      for ( uint32_t r = 0; r < pp.rows.size(); ++r )
      {
        uint32_t rw = static_cast<uint32_t>( pp.rows[r].bits.size() );
        net_id rp = n.add_port( "R" + std::to_string( r ), port_dir::out, std::max( rw, 1u ) );
        row_ports.push_back( rp );
        for ( uint32_t t = 0; t < rw; ++t )
          gb.connect( pp.rows[r].bits[t], bit_ref::of_net( rp, t ) );
        if ( rw == 0 )
          gb.connect( bit_ref::constant( false ), bit_ref::of_net( rp, 0 ) );
      }
      REQUIRE( validate( n ).empty() );
      simulator sim( n );
      for ( uint64_t av = 0; av < ( uint64_t( 1 ) << wa ); ++av )
      {
        for ( uint64_t bv = 0; bv < ( uint64_t( 1 ) << wb ); ++bv )
        {
          sim_vector v;
          v.values["A"].resize( wa );
          v.values["B"].resize( wb );
          for ( uint32_t i = 0; i < wa; ++i )
            v.values["A"][i] = ( av >> i ) & 1;
          for ( uint32_t i = 0; i < wb; ++i )
            v.values["B"][i] = ( bv >> i ) & 1;
          auto out = sim.run_scalar( v );
          cpp_int sum = 0;
          for ( uint32_t r = 0; r < pp.rows.size(); ++r )
          {
            auto const& bits = out.at( "R" + std::to_string( r ) );
            for ( uint32_t t = 0; t < pp.rows[r].bits.size(); ++t )
            {
              if ( bits[t] )
                sum += cpp_int( 1 ) << ( pp.rows[r].offset + t );
            }
          }
          cpp_int mod = cpp_int( 1 ) << w;
          sum %= mod;
          CHECK( sum == cpp_int( av ) * bv % mod );
        }
      }
    }
  }
}

TEST_CASE( "reduce_tree: wallace stage counts match the recurrence" )
{
  CHECK( oracle_wallace_stages( 28 ) == 7 );
  CHECK( oracle_wallace_stages( 54 ) == 9 );

  netlist scratch;
  scratch.name = "scr";
  net_id a = scratch.add_port( "A", port_dir::in, 53 );
  net_id b = scratch.add_port( "B", port_dir::in, 53 );
  gate_builder gb( scratch, "u" );
  auto booth = gen_pp( gb, signal_ref::whole( a, 53 ).bits(), signal_ref::whole( b, 53 ).bits(),
                       pp_encoding::booth_r4, 106 );
  auto tb = reduce_tree( gb, booth, reduce_style::wallace );
  CHECK( tb.stages == oracle_wallace_stages( 28 ) );
  CHECK( conserved( tb, 106 ) );

  auto none = gen_pp( gb, signal_ref::whole( a, 53 ).bits(), signal_ref::whole( b, 53 ).bits(),
                      pp_encoding::none, 106 );
  auto tn = reduce_tree( gb, none, reduce_style::wallace );
  CHECK( tn.stages == oracle_wallace_stages( 54 ) );
  CHECK( conserved( tn, 106 ) );
}

TEST_CASE( "reduce_tree: three rows through the array style take one stage" )
{
  netlist scratch;
  scratch.name = "scr";
  net_id a = scratch.add_port( "A", port_dir::in, 4 );
  gate_builder gb( scratch, "u" );
  partial_product_array pp;
  pp.width = 5;
  for ( int r = 0; r < 3; ++r )
  {
    partial_product_array::row row;
    row.offset = 0;
    row.bits = signal_ref::whole( a, 4 ).bits();
    pp.rows.push_back( row );
  }
  auto t = reduce_tree( gb, pp, reduce_style::array );
  CHECK( t.stages == 1 );
}

TEST_CASE( "gen_mul: 4x4 fast equals the exhaustive oracle" )
{
  auto n = gen_mul( 4, 4, speed_grade::fast );
  REQUIRE( validate( n ).empty() );
  auto beh = behavioral_binop( cell_kind::MUL, 4, 4, 8 );
  auto v = check_equiv( n, beh, equiv_mode::exhaustive( 16 ) );
  CHECK( v.equivalent() );
}

TEST_CASE( "gen_mul: 1x1 is a single AND" )
{
  for ( auto g : { speed_grade::small, speed_grade::medium, speed_grade::fast } )
  {
    auto n = gen_mul( 1, 1, g );
    auto st = stats( n );
    CHECK( st.count( cell_kind::AND_ ) == 1 );
    CHECK( st.generic_gates - st.count( cell_kind::BUF ) == 1 );
    auto beh = behavioral_binop( cell_kind::MUL, 1, 1, 2 );
    CHECK( check_equiv( n, beh, equiv_mode::exhaustive( 16 ) ).equivalent() );
  }
}

TEST_CASE( "gen_mul: grades compute the same function, FAST is shallower" )
{
  auto small = gen_mul( 8, 8, speed_grade::small );
  auto fast = gen_mul( 8, 8, speed_grade::fast );
  auto v = check_equiv( small, fast, equiv_mode::exhaustive( 16 ) );
  CHECK( v.equivalent() );
  auto cs = unit_gate_cost( small );
  auto cf = unit_gate_cost( fast );
  CHECK( cf.delay < cs.delay );
}

TEST_CASE( "gen_macc: 3x3+6+6 matches the bignum oracle exhaustively" )
{
  auto n = gen_macc( 3, 3, 6, 6, speed_grade::fast );
  REQUIRE( validate( n ).empty() );
  auto beh = behavioral_macc( 3, 3, 6, 6 );
  auto v = check_equiv( n, beh, equiv_mode::exhaustive( 18 ) );
  CHECK( v.equivalent() );
}

TEST_CASE( "gen_macc: tying C and D to width-1 zeros reduces to the product" )
{
  auto n = gen_macc( 4, 4, 1, 1, speed_grade::medium );
  /* drive C and D with zero and compare against the 4x4 multiplier */
  netlist wrap;
  wrap.name = "wrap";
  net_id a = wrap.add_port( "A", port_dir::in, 4 );
  net_id b = wrap.add_port( "B", port_dir::in, 4 );
  net_id y = wrap.add_port( "Y", port_dir::out, 10 );
  std::map<net_id, net_id> nm;
  for ( auto const& [id, nn] : n.nets )
  {
    if ( nn.name == "A" )
      nm[id] = a;
    else if ( nn.name == "B" )
      nm[id] = b;
    else if ( nn.name == "Y" )
      nm[id] = y;
    else
      nm[id] = wrap.add_net( nn.name + "_i", nn.width );
  }
  for ( auto const& [cid, c] : n.cells )
  {
    cell cc = c;
    for ( auto& [pin, sr] : cc.pins )
    {
      signal_ref fixed;
      for ( uint32_t i = 0; i < sr.width(); ++i )
      {
        auto bb = sr.bit( i );
        if ( bb.is_const )
          fixed.append_bit( bb );
        else
        {
          auto const& nn = n.nets.at( bb.net );
          if ( nn.name == "C" || nn.name == "D" )
            fixed.append_bit( bit_ref::constant( false ) );
          else
            fixed.append_bit( bit_ref::of_net( nm.at( bb.net ), bb.index ) );
        }
      }
      cc.pins[pin] = fixed;
    }
    wrap.add_cell( std::move( cc ) );
  }
  remove_unused_nets( wrap );
  REQUIRE( validate( wrap ).empty() );

  auto mul = behavioral_binop( cell_kind::MUL, 4, 4, 8 );
  /* compare the low 8 bits: wrap Y[9:8] must read zero */
  netlist mul_ext;
  mul_ext.name = "wrap";
  {
    net_id ea = mul_ext.add_port( "A", port_dir::in, 4 );
    net_id eb = mul_ext.add_port( "B", port_dir::in, 4 );
    net_id ey = mul_ext.add_port( "Y", port_dir::out, 10 );
    cell c;
    c.kind = cell_kind::MUL;
    c.name = "op";
    c.params = { { "WA", 4 }, { "WB", 4 }, { "WY", 10 } };
    c.pins["A"] = signal_ref::whole( ea, 4 );
    c.pins["B"] = signal_ref::whole( eb, 4 );
    c.pins["Y"] = signal_ref::whole( ey, 10 );
    mul_ext.add_cell( std::move( c ) );
  }
  (void)mul;
  auto v = check_equiv( wrap, mul_ext, equiv_mode::exhaustive( 16 ) );
  CHECK( v.equivalent() );
}

TEST_CASE( "gen_macc_split: correct and present for comparisons" )
{
  auto n = gen_macc_split( 3, 3, 6, 6 );
  REQUIRE( validate( n ).empty() );
  auto beh = behavioral_macc( 3, 3, 6, 6 );
  auto v = check_equiv( n, beh, equiv_mode::exhaustive( 18 ) );
  CHECK( v.equivalent() );
}

TEST_CASE( "unit_gate_cost: model definition" )
{
  netlist n;
  n.name = "x";
  net_id a = n.add_port( "a", port_dir::in, 1 );
  net_id b = n.add_port( "b", port_dir::in, 1 );
  net_id y = n.add_port( "y", port_dir::out, 1 );
  cell c;
  c.kind = cell_kind::XOR_;
  c.name = "g";
  c.pins["A"] = signal_ref::whole( a, 1 );
  c.pins["B"] = signal_ref::whole( b, 1 );
  c.pins["Y"] = signal_ref::whole( y, 1 );
  n.add_cell( std::move( c ) );
  auto cost = unit_gate_cost( n );
  CHECK( cost.area == 2 );
  CHECK( cost.delay == 2 );
}

TEST_CASE( "unit_gate_cost: full adder costs 7 area, 4 delay" )
{
  netlist n;
  n.name = "fa";
  net_id a = n.add_port( "a", port_dir::in, 1 );
  net_id b = n.add_port( "b", port_dir::in, 1 );
  net_id ci = n.add_port( "ci", port_dir::in, 1 );
  net_id s = n.add_port( "s", port_dir::out, 1 );
  net_id co = n.add_port( "co", port_dir::out, 1 );
  gate_builder gb( n, "u" );
  auto [sum, carry] = gb.full_adder( bit_ref::of_net( a, 0 ), bit_ref::of_net( b, 0 ), bit_ref::of_net( ci, 0 ) );
  gb.connect( sum, bit_ref::of_net( s, 0 ) );
  gb.connect( carry, bit_ref::of_net( co, 0 ) );
  auto cost = unit_gate_cost( n );
  CHECK( cost.area == 7 );
  CHECK( cost.delay == 4 );
  /* word-level cells are rejected */
  auto beh = behavioral_binop( cell_kind::ADD, 2, 2, 3 );
  CHECK_THROWS_AS( unit_gate_cost( beh ), unmapped_cell );
}

TEST_CASE( "lau_replace: adders, subtractors, multipliers, maccs" )
{
  auto n = parse_netlist( "module lr\ninput a[5]\ninput b[5]\ninput c[3]\noutput s[6]\noutput d[5]\noutput p[8]\n"
                          "cell ADD g0 WA=5 WB=5 WY=6 .A(a) .B(b) .Y(s)\n"
                          "cell SUB g1 WA=5 WB=5 WY=5 .A(a) .B(b) .Y(d)\n"
                          "cell MUL g2 WA=5 WB=3 WY=8 .A(a) .B(c) .Y(p)\nend\n" );
  for ( auto g : { speed_grade::small, speed_grade::medium, speed_grade::fast } )
  {
    auto out = lau_replace( n, g );
    REQUIRE( validate( out ).empty() );
    auto st = stats( out );
    CHECK( st.count( cell_kind::ADD ) == 0 );
    CHECK( st.count( cell_kind::SUB ) == 0 );
    CHECK( st.count( cell_kind::MUL ) == 0 );
    auto v = check_equiv( n, out, equiv_mode::exhaustive( 16 ) );
    INFO( "grade " << to_string( g ) );
    CHECK( v.equivalent() );
  }
}

TEST_CASE( "lau_replace: truncating and widening output widths" )
{
  auto n = parse_netlist( "module tw\ninput a[4]\ninput b[4]\noutput y[5]\noutput z[12]\n"
                          "cell MUL g0 WA=4 WB=4 WY=5 .A(a) .B(b) .Y(y)\n"
                          "cell MUL g1 WA=4 WB=4 WY=12 .A(a) .B(b) .Y(z)\nend\n" );
  auto out = lau_replace( n, speed_grade::fast );
  REQUIRE( validate( out ).empty() );
  auto v = check_equiv( n, out, equiv_mode::exhaustive( 16 ) );
  CHECK( v.equivalent() );
}

TEST_CASE( "lau_replace: no arithmetic, no change" )
{
  auto n = parse_netlist( "module id\ninput a[1]\noutput y[1]\ncell NOT g .A(a) .Y(y)\nend\n" );
  auto out = lau_replace( n, speed_grade::fast );
  CHECK( structurally_equal( n, out ) );
}

TEST_CASE( "macc grade ordering: faster grades are never slower" )
{
  for ( uint32_t w : { 8u, 16u } )
  {
    auto fast = unit_gate_cost( gen_macc( w, w, 2 * w, 2 * w, speed_grade::fast ) );
    auto med = unit_gate_cost( gen_macc( w, w, 2 * w, 2 * w, speed_grade::medium ) );
    auto small = unit_gate_cost( gen_macc( w, w, 2 * w, 2 * w, speed_grade::small ) );
    INFO( "width " << w );
    CHECK( fast.delay <= med.delay );
    CHECK( med.delay <= small.delay );
  }
}
