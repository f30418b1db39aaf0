/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file lau.hpp
  \brief Library of arithmetic units: parametric adder, multiplier, and
         fused multiply-add generators in three speed grades, unit-gate
         cost estimation, and variable-width operator replacement

  Speed grades fix the architecture: SMALL uses a ripple-carry final adder
  and array reduction, MEDIUM a Brent-Kung adder with a Wallace tree and no
  Booth encoding, FAST radix-4 Booth with a Wallace tree and a Sklansky
  adder. `gen_macc_split` is a fourth reference datapath (Booth + Wallace +
  separate carry-save stage + two Brent-Kung adders) kept for architecture
  comparisons; it is not a speed grade.
*/

#pragma once

#include <deque>

#include "netlist.hpp"
#include "prefix_network.hpp"

namespace synkit
{

enum class speed_grade
{
  small,
  medium,
  fast
};

enum class pp_encoding
{
  none,
  booth_r4
};

enum class reduce_style
{
  wallace,
  array
};

inline std::string to_string( speed_grade g )
{
  switch ( g )
  {
  case speed_grade::small: return "small";
  case speed_grade::medium: return "medium";
  case speed_grade::fast: return "fast";
  }
  return "?";
}

inline std::optional<speed_grade> speed_grade_from_string( std::string const& s )
{
  if ( s == "small" )
    return speed_grade::small;
  if ( s == "medium" )
    return speed_grade::medium;
  if ( s == "fast" )
    return speed_grade::fast;
  return std::nullopt;
}

/*! \brief Emits 1-bit generic gates into a netlist with deterministic names;
 *         tracks producers so results can drive existing bits without buffers.
 */
class gate_builder
{
public:
  gate_builder( netlist& n, std::string prefix ) : n_( n ), prefix_( std::move( prefix ) ) {}

  bit_ref gate( cell_kind k, bit_ref a, bit_ref b = bit_ref::constant( false ), bit_ref s = bit_ref::constant( false ) )
  {
    net_id o = n_.add_net( n_.fresh_net_name( prefix_ + "n" + std::to_string( k_ ) ), 1 );
    cell c;
    c.kind = k;
    c.name = prefix_ + "g" + std::to_string( k_++ );
    c.pins["A"] = signal_ref::of_bit( a );
    note_read( a );
    uint32_t d = depth_of( a );
    if ( k != cell_kind::NOT_ && k != cell_kind::BUF )
    {
      c.pins["B"] = signal_ref::of_bit( b );
      note_read( b );
      d = std::max( d, depth_of( b ) );
    }
    if ( k == cell_kind::MUX )
    {
      c.pins["S"] = signal_ref::of_bit( s );
      note_read( s );
      d = std::max( d, depth_of( s ) );
    }
    c.pins["Y"] = signal_ref{ slice{ o, 0, 0 } };
    cell_id cid = n_.add_cell( std::move( c ) );
    producer_[{ o, 0 }] = cid;
    uint32_t cost = ( k == cell_kind::XOR_ || k == cell_kind::XNOR ) ? 2 : ( k == cell_kind::MUX ) ? 2
                    : ( k == cell_kind::NOT_ || k == cell_kind::BUF )                              ? 0
                                                                                                   : 1;
    depth_[{ o, 0 }] = d + cost;
    return bit_ref::of_net( o, 0 );
  }

  /*! \brief Unit-gate depth of a bit built so far (inputs and constants: 0). */
  uint32_t depth_of( bit_ref b ) const
  {
    if ( b.is_const )
      return 0;
    auto it = depth_.find( { b.net, b.index } );
    return it == depth_.end() ? 0 : it->second;
  }

  bit_ref and_( bit_ref a, bit_ref b ) { return gate( cell_kind::AND_, a, b ); }
  bit_ref or_( bit_ref a, bit_ref b ) { return gate( cell_kind::OR_, a, b ); }
  bit_ref xor_( bit_ref a, bit_ref b ) { return gate( cell_kind::XOR_, a, b ); }
  bit_ref xnor_( bit_ref a, bit_ref b ) { return gate( cell_kind::XNOR, a, b ); }
  bit_ref mux( bit_ref a, bit_ref b, bit_ref s ) { return gate( cell_kind::MUX, a, b, s ); }

  bit_ref not_( bit_ref a )
  {
    if ( a.is_const )
      return bit_ref::constant( !a.value ); // inverted constants stay constants
    return gate( cell_kind::NOT_, a );
  }

  /*! \brief sum, carry = a + b: one XOR, one AND. */
  std::pair<bit_ref, bit_ref> half_adder( bit_ref a, bit_ref b )
  {
    return { xor_( a, b ), and_( a, b ) };
  }

  /*! \brief sum, carry = a + b + c: 2 XOR + 2 AND + 1 OR. */
  std::pair<bit_ref, bit_ref> full_adder( bit_ref a, bit_ref b, bit_ref c )
  {
    bit_ref p = xor_( a, b );
    bit_ref sum = xor_( p, c );
    bit_ref g = and_( a, b );
    bit_ref t = and_( p, c );
    return { sum, or_( g, t ) };
  }

  /*! \brief Drives `target` (an existing net bit) with `source`: retargets
   *         the producing gate when it has no other reader, else buffers.
   */
  void connect( bit_ref source, bit_ref target )
  {
    if ( !source.is_const )
    {
      auto p = producer_.find( { source.net, source.index } );
      if ( p != producer_.end() && readers_[{ source.net, source.index }] == 0 )
      {
        n_.cells.at( p->second ).pins["Y"] = signal_ref::of_bit( target );
        producer_.erase( p );
        return;
      }
    }
    cell buf;
    buf.kind = cell_kind::BUF;
    buf.name = prefix_ + "g" + std::to_string( k_++ );
    buf.pins["A"] = signal_ref::of_bit( source );
    buf.pins["Y"] = signal_ref::of_bit( target );
    n_.add_cell( std::move( buf ) );
  }

  netlist& target() { return n_; }

private:
  void note_read( bit_ref b )
  {
    if ( !b.is_const )
      ++readers_[{ b.net, b.index }];
  }

  netlist& n_;
  std::string prefix_;
  uint32_t k_{ 0 };
  std::map<std::pair<net_id, uint32_t>, cell_id> producer_;
  std::map<std::pair<net_id, uint32_t>, uint32_t> readers_;
  std::map<std::pair<net_id, uint32_t>, uint32_t> depth_;
};

/*! \brief Rows of weighted bits; row bit t sits at column offset + t.
 *         The sum of all rows equals the encoded product (mod 2^width).
 */
struct partial_product_array
{
  struct row
  {
    uint32_t offset{ 0 };
    std::vector<bit_ref> bits;
  };

  std::vector<row> rows;
  uint32_t width{ 0 };
  pp_encoding encoding{ pp_encoding::none };
};

namespace lau_detail
{

inline bit_ref vbit( std::vector<bit_ref> const& v, int64_t i )
{
  if ( i < 0 || i >= static_cast<int64_t>( v.size() ) )
    return bit_ref::constant( false );
  return v[static_cast<size_t>( i )];
}

} // namespace lau_detail

/*! \brief Generates partial products of a*b over `width` columns.
 *
 * `none` yields widthB AND rows plus one reserved correction row (all zero
 * for plain unsigned products; addend fusion lands there), matching the
 * n+1 row count of the non-encoded scheme. `booth_r4` yields
 * ceil((widthB+1)/2) digit rows plus an unsigned-correction row carrying
 * the negation +1s and the folded sign-extension constant.
 */
inline partial_product_array gen_pp( gate_builder& gb, std::vector<bit_ref> const& a,
                                     std::vector<bit_ref> const& b, pp_encoding enc, uint32_t width )
{
  using lau_detail::vbit;
  partial_product_array pp;
  pp.width = width;
  pp.encoding = enc;

  if ( enc == pp_encoding::none )
  {
    for ( uint32_t j = 0; j < b.size(); ++j )
    {
      partial_product_array::row r;
      r.offset = j;
      for ( uint32_t t = 0; t < a.size() && j + t < width; ++t )
        r.bits.push_back( gb.and_( a[t], b[j] ) );
      pp.rows.push_back( std::move( r ) );
    }
    /* reserved correction row (zero): carry-in slot of the scheme */
    partial_product_array::row corr;
    corr.offset = 0;
    corr.bits.assign( width, bit_ref::constant( false ) );
    pp.rows.push_back( std::move( corr ) );
    return pp;
  }

  /* radix-4 Booth: digits d_j in {-2..2} from bits (b[2j+1], b[2j], b[2j-1]) */
  uint32_t wb = static_cast<uint32_t>( b.size() );
  uint32_t m = ( wb + 1 + 1 ) / 2; // ceil((wb+1)/2)
  uint32_t field = static_cast<uint32_t>( a.size() ) + 1;

  std::vector<bit_ref> signs( m );
  for ( uint32_t j = 0; j < m; ++j )
  {
    bit_ref s = vbit( b, 2 * static_cast<int64_t>( j ) + 1 );
    bit_ref v = vbit( b, 2 * static_cast<int64_t>( j ) );
    bit_ref u = vbit( b, 2 * static_cast<int64_t>( j ) - 1 );
    signs[j] = s;

    /* X_t = sel1*(a_t^s) | sel2*(a_{t-1}^s) | (d=0 and s): the inversion
       folds into the selected bit, keeping the row at five gate levels */
    bit_ref sel1 = gb.xor_( v, u );                           // |d| == 1
    bit_ref xnor_vu = gb.xnor_( v, u );
    bit_ref sel2 = gb.and_( gb.xor_( s, v ), xnor_vu );       // |d| == 2
    bit_ref zs = gb.and_( gb.and_( s, v ), xnor_vu );         // d == 0 with set sign

    partial_product_array::row r;
    r.offset = 2 * j;
    bit_ref xr_prev = gb.xor_( bit_ref::constant( false ), s );
    for ( uint32_t t = 0; t < field && r.offset + t < width; ++t )
    {
      bit_ref xr = t < a.size() ? gb.xor_( vbit( a, t ), s ) : gb.xor_( bit_ref::constant( false ), s );
      bit_ref n1 = gb.and_( sel1, xr );
      bit_ref n2 = gb.and_( sel2, xr_prev );
      r.bits.push_back( gb.or_( gb.or_( n1, zs ), n2 ) );
      xr_prev = xr;
    }
    /* sign-extension compression: -s*2^p = !s*2^p - 2^p */
    if ( r.offset + field < width )
      r.bits.push_back( gb.not_( signs[j] ) );
    pp.rows.push_back( std::move( r ) );
  }

  /* correction row: +s_j at column 2j plus the folded sign-extension
     constant sum_j (2^width - 2^(field+2j)) mod 2^width */
  wide_uint k( width );
  for ( uint32_t j = 0; j < m; ++j )
  {
    if ( field + 2 * j < width )
    {
      wide_uint term( width );
      term.set_bit( field + 2 * j, true );
      k = wide_uint::sub( k, term, width );
    }
  }
  std::vector<bit_ref> corr_bits( width, bit_ref::constant( false ) );
  for ( uint32_t c = 0; c < width; ++c )
  {
    if ( k.bit( c ) )
      corr_bits[c] = bit_ref::constant( true );
  }
  std::vector<partial_product_array::row> extra;
  for ( uint32_t j = 0; j < m; ++j )
  {
    uint32_t c = 2 * j;
    if ( c >= width )
      break;
    if ( corr_bits[c].is_const && !corr_bits[c].value )
    {
      corr_bits[c] = signs[j];
    }
    else
    {
      /* rare overlap with the constant (very asymmetric operands): spill */
      if ( extra.empty() )
      {
        extra.push_back( {} );
        extra.back().offset = 0;
        extra.back().bits.assign( width, bit_ref::constant( false ) );
      }
      extra.back().bits[c] = signs[j];
    }
  }
  partial_product_array::row corr;
  corr.offset = 0;
  corr.bits = std::move( corr_bits );
  pp.rows.push_back( std::move( corr ) );
  for ( auto& r : extra )
    pp.rows.push_back( std::move( r ) );
  return pp;
}

/*! \brief One compressor stage record: full or half adder placed at a column. */
struct compressor_placement
{
  uint32_t stage;
  uint32_t column;
  bool full; //!< full adder (3:2) or half adder (2:2)
};

struct compressor_tree
{
  std::vector<compressor_placement> placements;
  std::vector<std::vector<uint32_t>> column_counts; //!< occupancy per column before each stage and after the last
  uint32_t stages{ 0 };
  std::vector<bit_ref> sum_row, carry_row; //!< the final two rows, full width
};

/*! \brief Reduces the array to two rows.
 *
 * Wallace style compresses every column maximally per stage (greedy full
 * adders, a half adder on a leftover pair) until no column holds more than
 * two bits; array style folds one row per stage through a carry-save row.
 * Constant-0 bits take no tree resources.
 */
inline compressor_tree reduce_tree( gate_builder& gb, partial_product_array const& pp, reduce_style style )
{
  compressor_tree tree;
  uint32_t w = pp.width;

  auto snapshot = [&]( auto const& cols ) {
    std::vector<uint32_t> cnt( w );
    for ( uint32_t c = 0; c < w; ++c )
      cnt[c] = static_cast<uint32_t>( cols[c].size() );
    return cnt;
  };

  /* bits carry an arrival estimate; compressors consume the earliest bits
     first so late-arriving partial products enter later stages */
  struct timed_bit
  {
    uint32_t depth;
    uint64_t seq;
    bit_ref bit;
    bool operator<( timed_bit const& o ) const { return std::tie( depth, seq ) < std::tie( o.depth, o.seq ); }
  };
  uint64_t seq = 0;

  std::vector<std::vector<timed_bit>> cols( w );
  if ( style == reduce_style::wallace )
  {
    auto insert_bit = [&]( uint32_t c, bit_ref b ) {
      timed_bit tb{ gb.depth_of( b ), seq++, b };
      auto pos = std::upper_bound( cols[c].begin(), cols[c].end(), tb );
      cols[c].insert( pos, tb );
    };
    for ( auto const& r : pp.rows )
    {
      for ( uint32_t t = 0; t < r.bits.size(); ++t )
      {
        auto b = r.bits[t];
        if ( b.is_const && !b.value )
          continue;
        if ( r.offset + t < w )
          insert_bit( r.offset + t, b );
      }
    }
    tree.column_counts.push_back( snapshot( cols ) );

    auto max_count = [&]() {
      size_t mx = 0;
      for ( auto const& c : cols )
        mx = std::max( mx, c.size() );
      return mx;
    };
    while ( max_count() > 2 )
    {
      ++tree.stages;
      std::vector<std::vector<timed_bit>> next( w );
      auto emit = [&]( std::vector<timed_bit>& dst, bit_ref b ) {
        timed_bit tb{ gb.depth_of( b ), seq++, b };
        auto pos = std::upper_bound( dst.begin(), dst.end(), tb );
        dst.insert( pos, tb );
      };
      for ( uint32_t c = 0; c < w; ++c )
      {
        auto& col = cols[c];
        size_t i = 0;
        while ( col.size() - i >= 3 )
        {
          auto [s, cy] = gb.full_adder( col[i].bit, col[i + 1].bit, col[i + 2].bit );
          i += 3;
          emit( next[c], s );
          if ( c + 1 < w )
            emit( next[c + 1], cy );
          tree.placements.push_back( { tree.stages, c, true } );
        }
        if ( col.size() - i == 2 )
        {
          auto [s, cy] = gb.half_adder( col[i].bit, col[i + 1].bit );
          i += 2;
          emit( next[c], s );
          if ( c + 1 < w )
            emit( next[c + 1], cy );
          tree.placements.push_back( { tree.stages, c, false } );
        }
        else if ( col.size() - i == 1 )
        {
          emit( next[c], col[i].bit );
        }
      }
      cols = std::move( next );
      tree.column_counts.push_back( snapshot( cols ) );
    }
  }
  else
  {
    /* array: fold rows into an accumulating carry-save pair, one per stage */
    std::deque<std::vector<bit_ref>> rows; // full-width aligned rows
    for ( auto const& r : pp.rows )
    {
      std::vector<bit_ref> full( w, bit_ref::constant( false ) );
      bool any = false;
      for ( uint32_t t = 0; t < r.bits.size() && r.offset + t < w; ++t )
      {
        full[r.offset + t] = r.bits[t];
        any |= !( r.bits[t].is_const && !r.bits[t].value );
      }
      if ( any )
        rows.push_back( std::move( full ) );
    }
    while ( rows.size() < 2 )
      rows.push_back( std::vector<bit_ref>( w, bit_ref::constant( false ) ) );

    auto row_snapshot = [&]() {
      std::vector<uint32_t> cnt( w, 0 );
      for ( auto const& r : rows )
        for ( uint32_t c = 0; c < w; ++c )
          if ( !( r[c].is_const && !r[c].value ) )
            ++cnt[c];
      return cnt;
    };
    tree.column_counts.push_back( row_snapshot() );
    while ( rows.size() > 2 )
    {
      ++tree.stages;
      auto r0 = rows.front();
      rows.pop_front();
      auto r1 = rows.front();
      rows.pop_front();
      auto r2 = rows.front();
      rows.pop_front();
      std::vector<bit_ref> s( w, bit_ref::constant( false ) ), cy( w, bit_ref::constant( false ) );
      for ( uint32_t c = 0; c < w; ++c )
      {
        std::vector<bit_ref> in;
        for ( auto const& r : { r0, r1, r2 } )
          if ( !( r[c].is_const && !r[c].value ) )
            in.push_back( r[c] );
        if ( in.size() == 3 )
        {
          auto [ss, cc] = gb.full_adder( in[0], in[1], in[2] );
          s[c] = ss;
          if ( c + 1 < w )
            cy[c + 1] = cc;
          tree.placements.push_back( { tree.stages, c, true } );
        }
        else if ( in.size() == 2 )
        {
          auto [ss, cc] = gb.half_adder( in[0], in[1] );
          s[c] = ss;
          if ( c + 1 < w )
            cy[c + 1] = cc;
          tree.placements.push_back( { tree.stages, c, false } );
        }
        else if ( in.size() == 1 )
        {
          s[c] = in[0];
        }
      }
      rows.push_front( std::move( cy ) );
      rows.push_front( std::move( s ) );
      tree.column_counts.push_back( row_snapshot() );
    }
    tree.sum_row = rows[0];
    tree.carry_row = rows[1];
    return tree;
  }

  tree.sum_row.assign( w, bit_ref::constant( false ) );
  tree.carry_row.assign( w, bit_ref::constant( false ) );
  for ( uint32_t c = 0; c < w; ++c )
  {
    if ( !cols[c].empty() )
      tree.sum_row[c] = cols[c][0].bit;
    if ( cols[c].size() > 1 )
      tree.carry_row[c] = cols[c][1].bit;
  }
  return tree;
}

/*! \brief Generate/propagate preprocessing, prefix carries, and the sum
 *         layer. Returns width+1 bits (full carry out). `cin` folds into
 *         the bit-0 generate term.
 */
inline std::vector<bit_ref> emit_prefix_adder( gate_builder& gb, std::vector<bit_ref> a,
                                               std::vector<bit_ref> b, prefix_arch arch, bool cin = false )
{
  uint32_t w = static_cast<uint32_t>( std::max( a.size(), b.size() ) );
  a.resize( w, bit_ref::constant( false ) );
  b.resize( w, bit_ref::constant( false ) );

  std::vector<bit_ref> g( w ), p( w );
  for ( uint32_t i = 0; i < w; ++i )
  {
    g[i] = gb.and_( a[i], b[i] );
    p[i] = gb.xor_( a[i], b[i] );
  }
  bit_ref g0 = g[0];
  if ( cin )
    g0 = gb.or_( g[0], p[0] ); // carry-in 1 generates whenever a0 or b0 is set

  auto pn = prefix_network::build( w, arch );
  /* span -> (G, P); P is only materialized for spans not reaching bit 0 */
  std::map<std::pair<uint32_t, uint32_t>, std::pair<bit_ref, bit_ref>> span;
  span[{ 0, 0 }] = { g0, p[0] };
  for ( uint32_t i = 1; i < w; ++i )
    span[{ i, i }] = { g[i], p[i] };
  for ( auto const& node : pn.nodes() )
  {
    auto const& hi = span.at( { node.msb, node.mid } );
    auto const& lo = span.at( { node.mid - 1, node.lsb } );
    bit_ref gg = gb.or_( hi.first, gb.and_( hi.second, lo.first ) );
    bit_ref pp = bit_ref::constant( false );
    if ( node.lsb > 0 )
      pp = gb.and_( hi.second, lo.second );
    span[{ node.msb, node.lsb }] = { gg, pp };
  }

  std::vector<bit_ref> sum( w + 1 );
  sum[0] = cin ? gb.not_( p[0] ) : p[0];
  for ( uint32_t i = 1; i < w; ++i )
    sum[i] = gb.xor_( p[i], span.at( { i - 1, 0 } ).first );
  sum[w] = span.at( { w - 1, 0 } ).first;
  return sum;
}

namespace lau_detail
{

inline std::pair<pp_encoding, std::pair<reduce_style, prefix_arch>> grade_config( speed_grade g )
{
  switch ( g )
  {
  case speed_grade::small:
    return { pp_encoding::none, { reduce_style::array, prefix_arch::ripple } };
  case speed_grade::medium:
    return { pp_encoding::none, { reduce_style::wallace, prefix_arch::brent_kung } };
  case speed_grade::fast:
  default:
    return { pp_encoding::booth_r4, { reduce_style::wallace, prefix_arch::sklansky } };
  }
}

/* a * b over `width` columns, returned as bit refs */
inline std::vector<bit_ref> emit_mul( gate_builder& gb, std::vector<bit_ref> const& a,
                                      std::vector<bit_ref> const& b, speed_grade grade, uint32_t width )
{
  if ( a.size() == 1 && b.size() == 1 )
  {
    std::vector<bit_ref> y( width, bit_ref::constant( false ) );
    y[0] = gb.and_( a[0], b[0] );
    return y;
  }
  auto cfg = grade_config( grade );
  auto pp = gen_pp( gb, a, b, cfg.first, width );
  auto tree = reduce_tree( gb, pp, cfg.second.first );
  auto sum = emit_prefix_adder( gb, tree.sum_row, tree.carry_row, cfg.second.second );
  sum.resize( width, bit_ref::constant( false ) );
  return sum;
}

/* a*b + c + d at full precision width */
inline std::vector<bit_ref> emit_macc( gate_builder& gb, std::vector<bit_ref> const& a,
                                       std::vector<bit_ref> const& b, std::vector<bit_ref> const& c,
                                       std::vector<bit_ref> const& d, speed_grade grade, uint32_t width )
{
  auto cfg = grade_config( grade );
  auto pp = gen_pp( gb, a, b, cfg.first, width );
  partial_product_array::row rc;
  rc.offset = 0;
  rc.bits = c;
  pp.rows.push_back( std::move( rc ) );
  partial_product_array::row rd;
  rd.offset = 0;
  rd.bits = d;
  pp.rows.push_back( std::move( rd ) );
  auto tree = reduce_tree( gb, pp, cfg.second.first );
  auto sum = emit_prefix_adder( gb, tree.sum_row, tree.carry_row, cfg.second.second );
  sum.resize( width, bit_ref::constant( false ) );
  return sum;
}

} // namespace lau_detail

/*! \brief A + B with full carry out: ports A[w], B[w], Y[w+1]. */
inline netlist gen_adder( uint32_t width, speed_grade grade )
{
  netlist n;
  n.name = "add" + std::to_string( width ) + "_" + to_string( grade );
  net_id a = n.add_port( "A", port_dir::in, width );
  net_id b = n.add_port( "B", port_dir::in, width );
  net_id y = n.add_port( "Y", port_dir::out, width + 1 );
  gate_builder gb( n, "u" );
  auto sum = emit_prefix_adder( gb, signal_ref::whole( a, width ).bits(),
                                signal_ref::whole( b, width ).bits(),
                                lau_detail::grade_config( grade ).second.second );
  for ( uint32_t i = 0; i <= width; ++i )
    gb.connect( sum[i], bit_ref::of_net( y, i ) );
  return n;
}

/*! \brief A * B: ports A[wa], B[wb], Y[wa+wb]. */
inline netlist gen_mul( uint32_t wa, uint32_t wb, speed_grade grade )
{
  netlist n;
  n.name = "mul" + std::to_string( wa ) + "x" + std::to_string( wb ) + "_" + to_string( grade );
  net_id a = n.add_port( "A", port_dir::in, wa );
  net_id b = n.add_port( "B", port_dir::in, wb );
  net_id y = n.add_port( "Y", port_dir::out, wa + wb );
  gate_builder gb( n, "u" );
  auto bits = lau_detail::emit_mul( gb, signal_ref::whole( a, wa ).bits(),
                                    signal_ref::whole( b, wb ).bits(), grade, wa + wb );
  for ( uint32_t i = 0; i < wa + wb; ++i )
    gb.connect( bits[i], bit_ref::of_net( y, i ) );
  return n;
}

inline uint32_t macc_width( uint32_t wa, uint32_t wb, uint32_t wc, uint32_t wd )
{
  return std::max( { wa + wb, wc, wd } ) + 2;
}

/*! \brief A*B + C + D with one fused compressor tree and a single final
 *         carry-propagate adder: ports A, B, C, D, Y[full precision].
 */
inline netlist gen_macc( uint32_t wa, uint32_t wb, uint32_t wc, uint32_t wd, speed_grade grade )
{
  netlist n;
  n.name = "macc_" + to_string( grade );
  net_id a = n.add_port( "A", port_dir::in, wa );
  net_id b = n.add_port( "B", port_dir::in, wb );
  net_id c = n.add_port( "C", port_dir::in, wc );
  net_id d = n.add_port( "D", port_dir::in, wd );
  uint32_t w = macc_width( wa, wb, wc, wd );
  net_id y = n.add_port( "Y", port_dir::out, w );
  gate_builder gb( n, "u" );
  auto bits = lau_detail::emit_macc( gb, signal_ref::whole( a, wa ).bits(),
                                     signal_ref::whole( b, wb ).bits(),
                                     signal_ref::whole( c, wc ).bits(),
                                     signal_ref::whole( d, wd ).bits(), grade, w );
  for ( uint32_t i = 0; i < w; ++i )
    gb.connect( bits[i], bit_ref::of_net( y, i ) );
  return n;
}

/*! \brief Reference datapath with the summation split from the multiplier:
 *         Booth + Wallace + Brent-Kung product adder, then a carry-save row
 *         over (product, C, D) and a second Brent-Kung adder.
 */
inline netlist gen_macc_split( uint32_t wa, uint32_t wb, uint32_t wc, uint32_t wd )
{
  netlist n;
  n.name = "macc_split";
  net_id a = n.add_port( "A", port_dir::in, wa );
  net_id b = n.add_port( "B", port_dir::in, wb );
  net_id c = n.add_port( "C", port_dir::in, wc );
  net_id d = n.add_port( "D", port_dir::in, wd );
  uint32_t w = macc_width( wa, wb, wc, wd );
  net_id y = n.add_port( "Y", port_dir::out, w );
  gate_builder gb( n, "u" );

  /* discrete multiplier */
  auto pp = gen_pp( gb, signal_ref::whole( a, wa ).bits(), signal_ref::whole( b, wb ).bits(),
                    pp_encoding::booth_r4, wa + wb );
  auto tree = reduce_tree( gb, pp, reduce_style::wallace );
  auto prod = emit_prefix_adder( gb, tree.sum_row, tree.carry_row, prefix_arch::brent_kung );
  prod.resize( wa + wb, bit_ref::constant( false ) );

  /* separate carry-save stage over (product, c, d), then the final adder */
  partial_product_array sum3;
  sum3.width = w;
  sum3.encoding = pp_encoding::none;
  partial_product_array::row rp;
  rp.offset = 0;
  rp.bits = prod;
  sum3.rows.push_back( std::move( rp ) );
  partial_product_array::row rc;
  rc.offset = 0;
  rc.bits = signal_ref::whole( c, wc ).bits();
  sum3.rows.push_back( std::move( rc ) );
  partial_product_array::row rd;
  rd.offset = 0;
  rd.bits = signal_ref::whole( d, wd ).bits();
  sum3.rows.push_back( std::move( rd ) );
  auto csa = reduce_tree( gb, sum3, reduce_style::array );
  auto sum = emit_prefix_adder( gb, csa.sum_row, csa.carry_row, prefix_arch::brent_kung );
  for ( uint32_t i = 0; i < w; ++i )
    gb.connect( i < sum.size() ? sum[i] : bit_ref::constant( false ), bit_ref::of_net( y, i ) );
  return n;
}

struct unit_gate_cost_t
{
  uint64_t area{ 0 };
  uint32_t delay{ 0 };
};

/*! \brief Zimmermann unit-gate model: inverters and buffers are free,
 *         AND/OR/NAND/NOR cost 1/1, XOR/XNOR 2/2, MUX 3 area and 2 delay.
 */
inline unit_gate_cost_t unit_gate_cost( netlist const& n )
{
  auto cost_of = []( cell_kind k ) -> std::pair<uint32_t, uint32_t> {
    switch ( k )
    {
    case cell_kind::NOT_:
    case cell_kind::BUF:
      return { 0, 0 };
    case cell_kind::AND_:
    case cell_kind::OR_:
    case cell_kind::NAND:
    case cell_kind::NOR_:
      return { 1, 1 };
    case cell_kind::XOR_:
    case cell_kind::XNOR:
      return { 2, 2 };
    case cell_kind::MUX:
      return { 3, 2 };
    default:
      throw unmapped_cell( "unit-gate cost requires generic gates, found " + to_string( k ) );
    }
  };

  unit_gate_cost_t total;
  auto order = topo_order( n );
  driver_map dm( n );
  std::map<net_id, std::vector<uint32_t>> arrival;
  for ( auto const& [id, nn] : n.nets )
    arrival[id].assign( nn.width, 0 );

  for ( auto cid : order )
  {
    auto const& c = n.cells.at( cid );
    auto [a_cost, d_cost] = cost_of( c.kind );
    total.area += a_cost;
    uint32_t in_arr = 0;
    for ( auto const& [pin, sr] : c.pins )
    {
      if ( pin == "Y" )
        continue;
      for ( auto b : sr.bits() )
        if ( !b.is_const )
          in_arr = std::max( in_arr, arrival[b.net][b.index] );
    }
    uint32_t out = in_arr + d_cost;
    total.delay = std::max( total.delay, out );
    for ( auto b : c.pins.at( "Y" ).bits() )
      if ( !b.is_const )
        arrival[b.net][b.index] = out;
  }
  return total;
}

/*! \brief Replaces every ADD/SUB/MUL/MACC cell by the grade's generated
 *         structure, any width (SUB via complement + carry-in).
 */
inline netlist lau_replace( netlist const& n_in, speed_grade grade )
{
  netlist n = n_in;
  std::vector<cell_id> targets;
  for ( auto const& [cid, c] : n.cells )
  {
    if ( c.kind == cell_kind::ADD || c.kind == cell_kind::SUB || c.kind == cell_kind::MUL || c.kind == cell_kind::MACC )
      targets.push_back( cid );
  }

  for ( auto cid : targets )
  {
    auto const c = n.cells.at( cid ); // copy
    n.remove_cell( cid );
    gate_builder gb( n, c.name + "__" );
    uint32_t wy = static_cast<uint32_t>( c.param( "WY" ) );
    auto abits = c.pins.at( "A" ).bits();
    std::vector<bit_ref> result;

    switch ( c.kind )
    {
    case cell_kind::ADD:
    {
      auto bbits = c.pins.at( "B" ).bits();
      uint32_t w = static_cast<uint32_t>( std::max( abits.size(), bbits.size() ) );
      if ( wy <= w )
      {
        abits.resize( wy, bit_ref::constant( false ) );
        bbits.resize( wy, bit_ref::constant( false ) );
        result = emit_prefix_adder( gb, abits, bbits, lau_detail::grade_config( grade ).second.second );
      }
      else
      {
        result = emit_prefix_adder( gb, abits, bbits, lau_detail::grade_config( grade ).second.second );
      }
      result.resize( wy, bit_ref::constant( false ) );
      break;
    }
    case cell_kind::SUB:
    {
      auto bbits = c.pins.at( "B" ).bits();
      abits.resize( wy, bit_ref::constant( false ) );
      bbits.resize( wy, bit_ref::constant( false ) );
      for ( auto& bb : bbits )
        bb = gb.not_( bb );
      result = emit_prefix_adder( gb, abits, bbits, lau_detail::grade_config( grade ).second.second, true );
      result.resize( wy, bit_ref::constant( false ) );
      break;
    }
    case cell_kind::MUL:
    {
      auto bbits = c.pins.at( "B" ).bits();
      uint32_t full = static_cast<uint32_t>( abits.size() + bbits.size() );
      uint32_t w = std::min( full, wy );
      result = lau_detail::emit_mul( gb, abits, bbits, grade, w );
      result.resize( wy, bit_ref::constant( false ) );
      break;
    }
    case cell_kind::MACC:
    {
      auto bbits = c.pins.at( "B" ).bits();
      auto cbits = c.pins.at( "C" ).bits();
      auto dbits = c.pins.at( "D" ).bits();
      result = lau_detail::emit_macc( gb, abits, bbits, cbits, dbits, grade, wy );
      break;
    }
    default:
      break;
    }

    auto ybits = c.pins.at( "Y" ).bits();
    for ( uint32_t i = 0; i < ybits.size(); ++i )
    {
      if ( !ybits[i].is_const )
        gb.connect( i < result.size() ? result[i] : bit_ref::constant( false ), ybits[i] );
    }
  }
  remove_unused_nets( n );
  return n;
}

} // namespace synkit
