/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file snl.hpp
  \brief Structural netlist text format (.snl): parser and deterministic writer

  Line-oriented grammar, `#` starts a comment:

    module NAME
    input|output|wire NAME[W]
    cell KIND INST (PARAM=INT)* (.PIN(SIGEXPR))+
    end

  SIGEXPR := NAME | NAME[i] | NAME[m:l] | {SIGEXPR, ...}
           | W'bBITS | W'hHEX | W'dDEC

  Concatenations are MSB first, as in Verilog. LIB cells spell their kind
  as `LIB:cellname`.
*/

#pragma once

#include <cctype>
#include <charconv>
#include <sstream>
#include <string>
#include <string_view>

#include "netlist.hpp"

namespace synkit
{

namespace snl_detail
{

class lexer
{
public:
  lexer( std::string_view text ) : text_( text ) {}

  struct token
  {
    std::string value;
    int line;
    int col;
    bool eof{ false };
  };

  token next()
  {
    skip_space_and_comments();
    token t{ "", line_, col_, false };
    if ( pos_ >= text_.size() )
    {
      t.eof = true;
      return t;
    }
    char c = text_[pos_];
    if ( is_punct( c ) )
    {
      t.value = std::string( 1, c );
      advance();
      return t;
    }
    while ( pos_ < text_.size() && !std::isspace( static_cast<unsigned char>( text_[pos_] ) ) && !is_punct( text_[pos_] ) && text_[pos_] != '#' )
    {
      t.value.push_back( text_[pos_] );
      advance();
    }
    return t;
  }

  int line() const { return line_; }
  int col() const { return col_; }

private:
  static bool is_punct( char c )
  {
    return c == '(' || c == ')' || c == '{' || c == '}' || c == ',' || c == '[' || c == ']' || c == ':' || c == '=' || c == '.';
  }

  void advance()
  {
    if ( text_[pos_] == '\n' )
    {
      ++line_;
      col_ = 1;
    }
    else
    {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments()
  {
    while ( pos_ < text_.size() )
    {
      char c = text_[pos_];
      if ( c == '#' )
      {
        while ( pos_ < text_.size() && text_[pos_] != '\n' )
          advance();
      }
      else if ( std::isspace( static_cast<unsigned char>( c ) ) )
      {
        advance();
      }
      else
      {
        break;
      }
    }
  }

  std::string_view text_;
  size_t pos_{ 0 };
  int line_{ 1 };
  int col_{ 1 };
};

inline bool valid_ident( std::string const& s )
{
  if ( s.empty() )
    return false;
  if ( !std::isalpha( static_cast<unsigned char>( s[0] ) ) && s[0] != '_' )
    return false;
  for ( char c : s )
  {
    if ( !std::isalnum( static_cast<unsigned char>( c ) ) && c != '_' )
      return false;
  }
  return true;
}

} // namespace snl_detail

class snl_parser
{
public:
  explicit snl_parser( std::string_view text ) : lex_( text ) { cur_ = lex_.next(); }

  netlist parse_module()
  {
    expect_keyword( "module" );
    netlist n;
    n.name = expect_ident( "module name" );
    while ( true )
    {
      if ( cur_.eof )
        throw syntax_error( cur_.line, cur_.col, "'end'" );
      if ( cur_.value == "end" )
      {
        consume();
        break;
      }
      if ( cur_.value == "input" || cur_.value == "output" || cur_.value == "wire" )
        parse_decl( n );
      else if ( cur_.value == "cell" )
        parse_cell( n );
      else
        throw syntax_error( cur_.line, cur_.col, "'input', 'output', 'wire', 'cell' or 'end'" );
    }
    return n;
  }

  bool at_eof() const { return cur_.eof; }

private:
  void parse_decl( netlist& n )
  {
    std::string kw = cur_.value;
    consume();
    int line = cur_.line;
    std::string name = expect_ident( "net name" );
    expect_punct( "[" );
    uint32_t width = expect_uint( "width" );
    expect_punct( "]" );
    if ( width < 1 )
      throw semantic_error( line, "width of '" + name + "' must be >= 1" );
    if ( n.find_net( name ) )
      throw semantic_error( line, "net '" + name + "' declared twice" );
    if ( kw == "wire" )
      n.add_net( name, width );
    else
      n.add_port( name, kw == "input" ? port_dir::in : port_dir::out, width );
  }

  void parse_cell( netlist& n )
  {
    consume(); // 'cell'
    int line = cur_.line;
    std::string kind_tok = expect_ident( "cell kind" );
    cell c;
    if ( kind_tok == "LIB" )
    {
      expect_punct( ":" );
      c.kind = cell_kind::LIB;
      c.lib_cell = expect_ident( "library cell name" );
    }
    else
    {
      auto k = cell_kind_from_string( kind_tok );
      if ( !k )
        throw semantic_error( line, "unknown cell kind '" + kind_tok + "'" );
      c.kind = *k;
    }
    c.name = expect_ident( "instance name" );

    /* params */
    while ( !cur_.eof && cur_.value != "." && snl_detail::valid_ident( cur_.value ) && peek_is_param() )
    {
      std::string pname = cur_.value;
      consume();
      expect_punct( "=" );
      int64_t v = static_cast<int64_t>( expect_uint( "parameter value" ) );
      c.params[pname] = v;
    }

    /* pins */
    bool any_pin = false;
    while ( !cur_.eof && cur_.value == "." )
    {
      consume();
      std::string pin = expect_ident( "pin name" );
      expect_punct( "(" );
      signal_ref sr = parse_sigexpr( n );
      expect_punct( ")" );
      if ( c.pins.count( pin ) )
        throw semantic_error( line, "pin '" + pin + "' connected twice on '" + c.name + "'" );
      c.pins[pin] = std::move( sr );
      any_pin = true;
    }
    if ( !any_pin )
      throw syntax_error( cur_.line, cur_.col, "at least one '.PIN(...)' connection" );
    n.add_cell( std::move( c ) );
  }

  /* returns segments MSB-first as written; converts to LSB-first storage */
  signal_ref parse_sigexpr( netlist const& n )
  {
    std::vector<signal_ref> parts; // MSB first
    parse_sigexpr_into( n, parts );
    signal_ref out;
    for ( auto it = parts.rbegin(); it != parts.rend(); ++it )
      out.append( *it );
    return out;
  }

  void parse_sigexpr_into( netlist const& n, std::vector<signal_ref>& parts )
  {
    if ( cur_.value == "{" )
    {
      consume();
      while ( true )
      {
        parse_sigexpr_into( n, parts );
        if ( cur_.value == "," )
        {
          consume();
          continue;
        }
        expect_punct( "}" );
        break;
      }
      return;
    }
    int line = cur_.line, col = cur_.col;
    std::string tok = cur_.value;
    if ( tok.empty() )
      throw syntax_error( line, col, "signal expression" );

    /* constant literal W'bBITS etc. */
    if ( std::isdigit( static_cast<unsigned char>( tok[0] ) ) )
    {
      auto q = tok.find( '\'' );
      if ( q == std::string::npos || q + 1 >= tok.size() )
        throw syntax_error( line, col, "constant of the form W'bBITS, W'hHEX or W'dDEC" );
      uint32_t w = 0;
      auto [p, ec] = std::from_chars( tok.data(), tok.data() + q, w );
      if ( ec != std::errc() || p != tok.data() + q || w < 1 )
        throw syntax_error( line, col, "constant width" );
      char base = tok[q + 1];
      std::string digits = tok.substr( q + 2 );
      std::vector<bool> bits( w, false );
      if ( base == 'b' )
      {
        if ( digits.empty() || digits.size() > w )
          throw semantic_error( line, "binary constant does not fit in " + std::to_string( w ) + " bits" );
        for ( size_t i = 0; i < digits.size(); ++i )
        {
          char d = digits[digits.size() - 1 - i];
          if ( d != '0' && d != '1' )
            throw syntax_error( line, col, "binary digits" );
          bits[i] = d == '1';
        }
      }
      else if ( base == 'h' )
      {
        if ( digits.empty() )
          throw syntax_error( line, col, "hex digits" );
        for ( size_t i = 0; i < digits.size(); ++i )
        {
          char d = static_cast<char>( std::tolower( digits[digits.size() - 1 - i] ) );
          int v = d >= '0' && d <= '9' ? d - '0' : ( d >= 'a' && d <= 'f' ? d - 'a' + 10 : -1 );
          if ( v < 0 )
            throw syntax_error( line, col, "hex digits" );
          for ( int b = 0; b < 4; ++b )
          {
            uint32_t pos = static_cast<uint32_t>( i * 4 + b );
            bool bv = ( v >> b ) & 1;
            if ( pos >= w )
            {
              if ( bv )
                throw semantic_error( line, "hex constant does not fit in " + std::to_string( w ) + " bits" );
            }
            else
            {
              bits[pos] = bv;
            }
          }
        }
      }
      else if ( base == 'd' )
      {
        uint64_t v = 0;
        auto [p2, ec2] = std::from_chars( digits.data(), digits.data() + digits.size(), v );
        if ( ec2 != std::errc() || p2 != digits.data() + digits.size() )
          throw syntax_error( line, col, "decimal digits" );
        for ( uint32_t i = 0; i < w && i < 64; ++i )
          bits[i] = ( v >> i ) & 1;
        if ( w < 64 && ( v >> w ) != 0 )
          throw semantic_error( line, "decimal constant does not fit in " + std::to_string( w ) + " bits" );
      }
      else
      {
        throw syntax_error( line, col, "'b', 'h' or 'd' base" );
      }
      consume();
      parts.push_back( signal_ref::constant( std::move( bits ) ) );
      return;
    }

    /* net reference */
    std::string name = expect_ident( "net name" );
    auto id = n.find_net( name );
    if ( !id )
      throw semantic_error( line, "reference to undeclared net '" + name + "'" );
    uint32_t nw = n.nets.at( *id ).width;
    uint32_t msb = nw - 1, lsb = 0;
    if ( cur_.value == "[" )
    {
      consume();
      msb = expect_uint( "bit index" );
      lsb = msb;
      if ( cur_.value == ":" )
      {
        consume();
        lsb = expect_uint( "lsb index" );
      }
      expect_punct( "]" );
      if ( msb < lsb || msb >= nw )
        throw semantic_error( line, "slice [" + std::to_string( msb ) + ":" + std::to_string( lsb ) + "] outside net '" + name + "'" );
    }
    signal_ref sr;
    sr.segments.push_back( slice{ *id, msb, lsb } );
    parts.push_back( std::move( sr ) );
  }

  bool peek_is_param()
  {
    /* a param looks like IDENT '=' — look ahead without consuming */
    snl_detail::lexer save = lex_;
    auto saved_cur = cur_;
    consume();
    bool is_param = cur_.value == "=";
    lex_ = save;
    cur_ = saved_cur;
    return is_param;
  }

  void consume() { cur_ = lex_.next(); }

  void expect_keyword( std::string const& kw )
  {
    if ( cur_.value != kw )
      throw syntax_error( cur_.line, cur_.col, "'" + kw + "'" );
    consume();
  }

  void expect_punct( std::string const& p )
  {
    if ( cur_.value != p )
      throw syntax_error( cur_.line, cur_.col, "'" + p + "'" );
    consume();
  }

  std::string expect_ident( std::string const& what )
  {
    if ( cur_.eof || !snl_detail::valid_ident( cur_.value ) )
      throw syntax_error( cur_.line, cur_.col, what );
    std::string v = cur_.value;
    consume();
    return v;
  }

  uint32_t expect_uint( std::string const& what )
  {
    uint32_t v = 0;
    auto [p, ec] = std::from_chars( cur_.value.data(), cur_.value.data() + cur_.value.size(), v );
    if ( cur_.eof || ec != std::errc() || p != cur_.value.data() + cur_.value.size() )
      throw syntax_error( cur_.line, cur_.col, what );
    consume();
    return v;
  }

  snl_detail::lexer lex_;
  snl_detail::lexer::token cur_;
};

inline netlist parse_netlist( std::string_view text )
{
  snl_parser p( text );
  return p.parse_module();
}

namespace snl_detail
{

inline std::string format_signal( netlist const& n, signal_ref const& sr )
{
  auto seg_str = [&]( segment const& seg ) {
    if ( auto* sl = std::get_if<slice>( &seg ) )
    {
      auto const& nn = n.nets.at( sl->net );
      if ( sl->lsb == 0 && sl->msb == nn.width - 1 )
        return nn.name;
      if ( sl->msb == sl->lsb )
        return nn.name + "[" + std::to_string( sl->msb ) + "]";
      return nn.name + "[" + std::to_string( sl->msb ) + ":" + std::to_string( sl->lsb ) + "]";
    }
    auto const& bits = std::get<const_run>( seg ).bits;
    std::string s = std::to_string( bits.size() ) + "'b";
    for ( size_t i = 0; i < bits.size(); ++i )
      s.push_back( bits[bits.size() - 1 - i] ? '1' : '0' );
    return s;
  };
  if ( sr.segments.size() == 1 )
    return seg_str( sr.segments[0] );
  std::string s = "{";
  for ( size_t i = 0; i < sr.segments.size(); ++i )
  {
    /* stored LSB-first, written MSB-first */
    if ( i )
      s += ", ";
    s += seg_str( sr.segments[sr.segments.size() - 1 - i] );
  }
  s += "}";
  return s;
}

} // namespace snl_detail

/*! \brief Deterministic emission: ports in declaration order, wires in id
 *         order, cells in topological order. Byte-stable under reparse.
 */
inline std::string write_netlist( netlist const& n )
{
  std::ostringstream os;
  os << "module " << n.name << "\n";
  for ( auto const& p : n.ports )
    os << ( p.dir == port_dir::in ? "input " : "output " ) << p.name << "[" << p.width << "]\n";
  std::set<net_id> port_nets;
  for ( auto const& p : n.ports )
    port_nets.insert( p.net );
  for ( auto const& [id, nn] : n.nets )
  {
    if ( !port_nets.count( id ) )
      os << "wire " << nn.name << "[" << nn.width << "]\n";
  }
  for ( auto cid : topo_order( n ) )
  {
    auto const& c = n.cells.at( cid );
    os << "cell ";
    if ( c.kind == cell_kind::LIB )
      os << "LIB:" << c.lib_cell;
    else
      os << to_string( c.kind );
    os << " " << c.name;
    for ( auto const& [p, v] : c.params )
      os << " " << p << "=" << v;
    /* inputs in signature order, then outputs */
    if ( c.kind == cell_kind::LIB )
    {
      for ( auto const& [pin, sr] : c.pins )
      {
        if ( pin != "Y" )
          os << " ." << pin << "(" << snl_detail::format_signal( n, sr ) << ")";
      }
      if ( c.pins.count( "Y" ) )
        os << " .Y(" << snl_detail::format_signal( n, c.pins.at( "Y" ) ) << ")";
    }
    else
    {
      for ( auto const& sig : cell_signature( c.kind ) )
      {
        auto it = c.pins.find( sig.name );
        if ( it != c.pins.end() )
          os << " ." << sig.name << "(" << snl_detail::format_signal( n, it->second ) << ")";
      }
    }
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

} // namespace synkit
