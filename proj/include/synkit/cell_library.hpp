/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file cell_library.hpp
  \brief Standard-cell library model: areas, pin caps, cell functions, and
         2-D delay tables per timing arc
*/

#pragma once

#include <cassert>
#include <charconv>
#include <cmath>
#include <memory>
#include <map>
#include <string>
#include <vector>

#include "common.hpp"

namespace synkit
{

/*! \brief Boolean expression over input pin names: & | ^ ! and parentheses. */
struct bool_expr
{
  enum class op_t
  {
    var,
    not_,
    and_,
    or_,
    xor_
  } op{ op_t::var };
  std::string var;
  std::shared_ptr<bool_expr> a, b;

  static std::shared_ptr<bool_expr> make_var( std::string v )
  {
    auto e = std::make_shared<bool_expr>();
    e->op = op_t::var;
    e->var = std::move( v );
    return e;
  }
  static std::shared_ptr<bool_expr> make( op_t o, std::shared_ptr<bool_expr> a, std::shared_ptr<bool_expr> b = nullptr )
  {
    auto e = std::make_shared<bool_expr>();
    e->op = o;
    e->a = std::move( a );
    e->b = std::move( b );
    return e;
  }

  uint64_t eval( std::map<std::string, uint64_t> const& values ) const
  {
    switch ( op )
    {
    case op_t::var:
    {
      auto it = values.find( var );
      return it == values.end() ? 0 : it->second;
    }
    case op_t::not_:
      return ~a->eval( values );
    case op_t::and_:
      return a->eval( values ) & b->eval( values );
    case op_t::or_:
      return a->eval( values ) | b->eval( values );
    case op_t::xor_:
      return a->eval( values ) ^ b->eval( values );
    }
    return 0;
  }

  void collect_vars( std::vector<std::string>& out ) const
  {
    if ( op == op_t::var )
    {
      out.push_back( var );
      return;
    }
    if ( a )
      a->collect_vars( out );
    if ( b )
      b->collect_vars( out );
  }

  std::string to_string() const
  {
    switch ( op )
    {
    case op_t::var:
      return var;
    case op_t::not_:
      return "!" + wrap( a );
    case op_t::and_:
      return wrap( a ) + " & " + wrap( b );
    case op_t::or_:
      return wrap( a ) + " | " + wrap( b );
    case op_t::xor_:
      return wrap( a ) + " ^ " + wrap( b );
    }
    return "?";
  }

private:
  static std::string wrap( std::shared_ptr<bool_expr> const& e )
  {
    if ( e->op == op_t::var || e->op == op_t::not_ )
      return e->to_string();
    return "(" + e->to_string() + ")";
  }
};

/*! \brief Parses `EXPR` with precedence ! > & > ^ > | . */
class bool_expr_parser
{
public:
  bool_expr_parser( std::string_view text, int line ) : text_( text ), line_( line ) {}

  std::shared_ptr<bool_expr> parse()
  {
    auto e = parse_or();
    skip_ws();
    if ( pos_ != text_.size() )
      throw syntax_error( line_, static_cast<int>( pos_ ) + 1, "end of expression" );
    return e;
  }

private:
  std::shared_ptr<bool_expr> parse_or()
  {
    auto e = parse_xor();
    while ( peek() == '|' )
    {
      ++pos_;
      e = bool_expr::make( bool_expr::op_t::or_, e, parse_xor() );
    }
    return e;
  }
  std::shared_ptr<bool_expr> parse_xor()
  {
    auto e = parse_and();
    while ( peek() == '^' )
    {
      ++pos_;
      e = bool_expr::make( bool_expr::op_t::xor_, e, parse_and() );
    }
    return e;
  }
  std::shared_ptr<bool_expr> parse_and()
  {
    auto e = parse_unary();
    while ( peek() == '&' )
    {
      ++pos_;
      e = bool_expr::make( bool_expr::op_t::and_, e, parse_unary() );
    }
    return e;
  }
  std::shared_ptr<bool_expr> parse_unary()
  {
    skip_ws();
    if ( peek() == '!' )
    {
      ++pos_;
      return bool_expr::make( bool_expr::op_t::not_, parse_unary() );
    }
    if ( peek() == '(' )
    {
      ++pos_;
      auto e = parse_or();
      skip_ws();
      if ( peek() != ')' )
        throw syntax_error( line_, static_cast<int>( pos_ ) + 1, "')'" );
      ++pos_;
      return e;
    }
    skip_ws();
    std::string name;
    while ( pos_ < text_.size() && ( std::isalnum( static_cast<unsigned char>( text_[pos_] ) ) || text_[pos_] == '_' ) )
      name.push_back( text_[pos_++] );
    if ( name.empty() )
      throw syntax_error( line_, static_cast<int>( pos_ ) + 1, "pin name" );
    return bool_expr::make_var( name );
  }

  char peek()
  {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void skip_ws()
  {
    while ( pos_ < text_.size() && std::isspace( static_cast<unsigned char>( text_[pos_] ) ) )
      ++pos_;
  }

  std::string_view text_;
  size_t pos_{ 0 };
  int line_;
};

/*! \brief 2-D delay grid over (input slew ps, output load fF). Rows follow
 *         the slew axis, columns the load axis.
 */
struct delay_table
{
  std::vector<double> slew_axis;
  std::vector<double> load_axis;
  std::vector<std::vector<double>> values;

  /*! \brief Bilinear interpolation; clamps outside the load axis, requires
   *         slew inside its axis.
   */
  double eval( double slew, double load ) const
  {
    if ( slew < slew_axis.front() || slew > slew_axis.back() )
      throw slew_out_of_range( "slew " + std::to_string( slew ) + " outside [" + std::to_string( slew_axis.front() ) + ", " + std::to_string( slew_axis.back() ) + "]" );
    load = std::min( std::max( load, load_axis.front() ), load_axis.back() );
    auto locate = []( std::vector<double> const& axis, double x ) {
      size_t hi = 1;
      while ( hi + 1 < axis.size() && axis[hi] < x )
        ++hi;
      return hi;
    };
    if ( slew_axis.size() == 1 && load_axis.size() == 1 )
      return values[0][0];
    if ( slew_axis.size() == 1 )
    {
      size_t j = locate( load_axis, load );
      double t = ( load - load_axis[j - 1] ) / ( load_axis[j] - load_axis[j - 1] );
      return values[0][j - 1] + t * ( values[0][j] - values[0][j - 1] );
    }
    if ( load_axis.size() == 1 )
    {
      size_t i = locate( slew_axis, slew );
      double t = ( slew - slew_axis[i - 1] ) / ( slew_axis[i] - slew_axis[i - 1] );
      return values[i - 1][0] + t * ( values[i][0] - values[i - 1][0] );
    }
    size_t i = locate( slew_axis, slew );
    size_t j = locate( load_axis, load );
    double ts = ( slew - slew_axis[i - 1] ) / ( slew_axis[i] - slew_axis[i - 1] );
    double tl = ( load - load_axis[j - 1] ) / ( load_axis[j] - load_axis[j - 1] );
    double v00 = values[i - 1][j - 1], v01 = values[i - 1][j];
    double v10 = values[i][j - 1], v11 = values[i][j];
    double v0 = v00 + tl * ( v01 - v00 );
    double v1 = v10 + tl * ( v11 - v10 );
    return v0 + ts * ( v1 - v0 );
  }
};

struct lib_pin
{
  std::string name;
  bool is_output{ false };
  double cap_ff{ 0.0 };
};

struct timing_arc
{
  std::string in_pin;
  std::string out_pin;
  delay_table table;
};

struct lib_cell_def
{
  std::string name;
  double area_ge{ 0.0 };
  std::vector<lib_pin> pins;
  std::shared_ptr<bool_expr> function; //!< over input pin names, drives the single output
  std::vector<timing_arc> arcs;

  std::vector<lib_pin const*> inputs() const
  {
    std::vector<lib_pin const*> r;
    for ( auto const& p : pins )
      if ( !p.is_output )
        r.push_back( &p );
    return r;
  }

  lib_pin const* output() const
  {
    for ( auto const& p : pins )
      if ( p.is_output )
        return &p;
    return nullptr;
  }

  /*! \brief Truth table over the input pins in declaration order (input 0 is
   *         the least significant variable). Valid for up to 6 inputs.
   */
  uint64_t truth_table() const
  {
    auto ins = inputs();
    assert( ins.size() <= 6 );
    std::map<std::string, uint64_t> vals;
    static constexpr uint64_t proj[6] = {
        0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
        0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
    for ( size_t i = 0; i < ins.size(); ++i )
      vals[ins[i]->name] = proj[i];
    uint64_t tt = function ? function->eval( vals ) : 0;
    uint32_t k = static_cast<uint32_t>( ins.size() );
    if ( k < 6 )
      tt &= ( uint64_t( 1 ) << ( 1u << k ) ) - 1;
    return tt;
  }

  double avg_input_cap() const
  {
    double sum = 0;
    uint32_t cnt = 0;
    for ( auto const& p : pins )
    {
      if ( !p.is_output )
      {
        sum += p.cap_ff;
        ++cnt;
      }
    }
    return cnt ? sum / cnt : 0.0;
  }
};

struct cell_library
{
  std::string name;
  std::vector<lib_cell_def> cells;

  lib_cell_def const* find( std::string const& n ) const
  {
    for ( auto const& c : cells )
      if ( c.name == n )
        return &c;
    return nullptr;
  }

  /*! \brief Area of the GE-normalization cell: the cell named NAND2, or the
   *         smallest cell computing a 2-input NAND/NOR-class function.
   */
  double nand2_area() const
  {
    if ( auto* c = find( "NAND2" ) )
      return c->area_ge;
    double best = -1.0;
    for ( auto const& c : cells )
    {
      if ( c.inputs().size() != 2 )
        continue;
      uint64_t tt = c.truth_table() & 0xf;
      if ( tt == 0x7 || tt == 0x1 || tt == 0x8 || tt == 0xe ) // NAND/NOR/AND/OR shapes
      {
        if ( best < 0 || c.area_ge < best )
          best = c.area_ge;
      }
    }
    if ( best < 0 )
      throw missing_nand2();
    return best;
  }
};

namespace num_detail
{

/*! \brief Shortest round-trip decimal form of a double (deterministic). */
inline std::string format_double( double v )
{
  char buf[64];
  auto [p, ec] = std::to_chars( buf, buf + sizeof buf, v );
  (void)ec;
  return std::string( buf, p );
}

} // namespace num_detail

} // namespace synkit
