/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file slf.hpp
  \brief Cell library text format (.slf): parser and deterministic writer

  Grammar, line-oriented, `#` comments:

    library NAME
    cell NAME area=F
    pin NAME in|out [cap=F]
    function OUT = EXPR
    arc IN->OUT slew=(v,...) load=(v,...) delay=(row; row; ...)
    end

  The single output pin of every cell must be named Y, which is also the
  pin name mapped netlists use.
*/

#pragma once

#include <sstream>

#include "cell_library.hpp"

namespace synkit
{

namespace slf_detail
{

inline std::vector<std::string> split_lines( std::string_view text )
{
  std::vector<std::string> lines;
  std::string cur;
  for ( char c : text )
  {
    if ( c == '\n' )
    {
      lines.push_back( cur );
      cur.clear();
    }
    else
    {
      cur.push_back( c );
    }
  }
  if ( !cur.empty() )
    lines.push_back( cur );
  return lines;
}

inline std::string strip( std::string s )
{
  auto h = s.find( '#' );
  if ( h != std::string::npos )
    s = s.substr( 0, h );
  size_t b = s.find_first_not_of( " \t\r" );
  if ( b == std::string::npos )
    return "";
  size_t e = s.find_last_not_of( " \t\r" );
  return s.substr( b, e - b + 1 );
}

inline double parse_double( std::string const& tok, int line )
{
  double v = 0;
  auto [p, ec] = std::from_chars( tok.data(), tok.data() + tok.size(), v );
  if ( ec != std::errc() || p != tok.data() + tok.size() )
    throw syntax_error( line, 1, "number, got '" + tok + "'" );
  return v;
}

inline std::vector<double> parse_list( std::string const& body, int line )
{
  std::vector<double> r;
  std::string cur;
  for ( char c : body )
  {
    if ( c == ',' )
    {
      r.push_back( parse_double( strip( cur ), line ) );
      cur.clear();
    }
    else
    {
      cur.push_back( c );
    }
  }
  if ( !strip( cur ).empty() )
    r.push_back( parse_double( strip( cur ), line ) );
  return r;
}

/* extracts `key=(...)` from a line */
inline std::string paren_group( std::string const& s, std::string const& key, int line )
{
  auto k = s.find( key + "=(" );
  if ( k == std::string::npos )
    throw syntax_error( line, 1, key + "=(...)" );
  auto open = k + key.size() + 1;
  auto close = s.find( ')', open );
  if ( close == std::string::npos )
    throw syntax_error( line, 1, "')'" );
  return s.substr( open + 1, close - open - 1 );
}

} // namespace slf_detail

inline cell_library parse_cell_library( std::string_view text )
{
  using namespace slf_detail;
  cell_library lib;
  auto lines = split_lines( text );
  lib_cell_def* cur = nullptr;
  bool seen_lib = false, seen_end = false;

  for ( size_t li = 0; li < lines.size(); ++li )
  {
    int ln = static_cast<int>( li + 1 );
    std::string s = strip( lines[li] );
    if ( s.empty() )
      continue;
    if ( seen_end )
      throw syntax_error( ln, 1, "end of file after 'end'" );
    std::istringstream is( s );
    std::string kw;
    is >> kw;
    if ( kw == "library" )
    {
      if ( seen_lib )
        throw semantic_error( ln, "duplicate 'library' header" );
      is >> lib.name;
      if ( lib.name.empty() )
        throw syntax_error( ln, 9, "library name" );
      seen_lib = true;
    }
    else if ( kw == "cell" )
    {
      if ( !seen_lib )
        throw syntax_error( ln, 1, "'library' header first" );
      lib_cell_def def;
      std::string name, area_kv;
      is >> name >> area_kv;
      if ( name.empty() || area_kv.rfind( "area=", 0 ) != 0 )
        throw syntax_error( ln, 1, "cell NAME area=F" );
      def.name = name;
      def.area_ge = parse_double( area_kv.substr( 5 ), ln );
      if ( lib.find( name ) )
        throw semantic_error( ln, "cell '" + name + "' declared twice" );
      lib.cells.push_back( std::move( def ) );
      cur = &lib.cells.back();
    }
    else if ( kw == "pin" )
    {
      if ( !cur )
        throw syntax_error( ln, 1, "'cell' before 'pin'" );
      lib_pin p;
      std::string dir, rest;
      is >> p.name >> dir;
      if ( dir != "in" && dir != "out" )
        throw syntax_error( ln, 1, "'in' or 'out'" );
      p.is_output = dir == "out";
      if ( is >> rest )
      {
        if ( rest.rfind( "cap=", 0 ) != 0 )
          throw syntax_error( ln, 1, "cap=F" );
        p.cap_ff = parse_double( rest.substr( 4 ), ln );
      }
      if ( p.is_output && p.name != "Y" )
        throw semantic_error( ln, "output pin must be named Y" );
      cur->pins.push_back( std::move( p ) );
    }
    else if ( kw == "function" )
    {
      if ( !cur )
        throw syntax_error( ln, 1, "'cell' before 'function'" );
      std::string out, eq;
      is >> out >> eq;
      if ( eq != "=" )
        throw syntax_error( ln, 1, "'='" );
      if ( out != "Y" )
        throw semantic_error( ln, "function must define output Y" );
      std::string expr;
      std::getline( is, expr );
      bool_expr_parser p( expr, ln );
      cur->function = p.parse();
      std::vector<std::string> vars;
      cur->function->collect_vars( vars );
      for ( auto const& v : vars )
      {
        bool found = false;
        for ( auto const& pin : cur->pins )
          found |= !pin.is_output && pin.name == v;
        if ( !found )
          throw semantic_error( ln, "function references undeclared input pin '" + v + "'" );
      }
    }
    else if ( kw == "arc" )
    {
      if ( !cur )
        throw syntax_error( ln, 1, "'cell' before 'arc'" );
      std::string spec;
      is >> spec;
      auto arrow = spec.find( "->" );
      if ( arrow == std::string::npos )
        throw syntax_error( ln, 1, "IN->OUT" );
      timing_arc arc;
      arc.in_pin = spec.substr( 0, arrow );
      arc.out_pin = spec.substr( arrow + 2 );
      if ( arc.out_pin != "Y" )
        throw semantic_error( ln, "arc output must be Y" );
      bool in_ok = false;
      for ( auto const& pin : cur->pins )
        in_ok |= !pin.is_output && pin.name == arc.in_pin;
      if ( !in_ok )
        throw semantic_error( ln, "arc references undeclared input pin '" + arc.in_pin + "'" );
      arc.table.slew_axis = parse_list( paren_group( s, "slew", ln ), ln );
      arc.table.load_axis = parse_list( paren_group( s, "load", ln ), ln );
      auto body = paren_group( s, "delay", ln );
      std::string row;
      for ( char c : body )
      {
        if ( c == ';' )
        {
          arc.table.values.push_back( parse_list( row, ln ) );
          row.clear();
        }
        else
        {
          row.push_back( c );
        }
      }
      if ( !strip( row ).empty() )
        arc.table.values.push_back( parse_list( row, ln ) );

      auto monotone = []( std::vector<double> const& a ) {
        for ( size_t i = 1; i < a.size(); ++i )
          if ( a[i] <= a[i - 1] )
            return false;
        return !a.empty();
      };
      if ( !monotone( arc.table.slew_axis ) )
        throw semantic_error( ln, "slew axis must be strictly increasing" );
      if ( !monotone( arc.table.load_axis ) )
        throw semantic_error( ln, "load axis must be strictly increasing" );
      if ( arc.table.values.size() != arc.table.slew_axis.size() )
        throw semantic_error( ln, "delay row count must match slew axis" );
      for ( auto const& r : arc.table.values )
      {
        if ( r.size() != arc.table.load_axis.size() )
          throw semantic_error( ln, "delay column count must match load axis" );
        for ( double v : r )
          if ( v < 0 )
            throw semantic_error( ln, "delay values must be >= 0" );
      }
      cur->arcs.push_back( std::move( arc ) );
    }
    else if ( kw == "end" )
    {
      seen_end = true;
    }
    else
    {
      throw syntax_error( ln, 1, "'library', 'cell', 'pin', 'function', 'arc' or 'end'" );
    }
  }
  if ( !seen_lib || !seen_end )
    throw syntax_error( static_cast<int>( lines.size() ), 1, "'library' ... 'end'" );

  /* semantic checks per cell */
  for ( auto const& c : lib.cells )
  {
    uint32_t nout = 0, nin = 0;
    for ( auto const& p : c.pins )
      ( p.is_output ? nout : nin )++;
    if ( nout != 1 || nin < 1 )
      throw semantic_error( 0, "cell '" + c.name + "' needs >= 1 input pin and exactly 1 output pin" );
    if ( !c.function )
      throw semantic_error( 0, "cell '" + c.name + "' has no function" );
  }
  return lib;
}

inline std::string write_cell_library( cell_library const& lib )
{
  using num_detail::format_double;
  std::ostringstream os;
  os << "library " << lib.name << "\n";
  for ( auto const& c : lib.cells )
  {
    os << "cell " << c.name << " area=" << format_double( c.area_ge ) << "\n";
    for ( auto const& p : c.pins )
    {
      os << "pin " << p.name << ( p.is_output ? " out" : " in" );
      if ( !p.is_output )
        os << " cap=" << format_double( p.cap_ff );
      os << "\n";
    }
    os << "function Y = " << c.function->to_string() << "\n";
    for ( auto const& a : c.arcs )
    {
      os << "arc " << a.in_pin << "->" << a.out_pin << " slew=(";
      for ( size_t i = 0; i < a.table.slew_axis.size(); ++i )
        os << ( i ? "," : "" ) << format_double( a.table.slew_axis[i] );
      os << ") load=(";
      for ( size_t i = 0; i < a.table.load_axis.size(); ++i )
        os << ( i ? "," : "" ) << format_double( a.table.load_axis[i] );
      os << ") delay=(";
      for ( size_t r = 0; r < a.table.values.size(); ++r )
      {
        if ( r )
          os << "; ";
        for ( size_t cidx = 0; cidx < a.table.values[r].size(); ++cidx )
          os << ( cidx ? "," : "" ) << format_double( a.table.values[r][cidx] );
      }
      os << ")\n";
    }
  }
  os << "end\n";
  return os.str();
}

} // namespace synkit
