/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file srl.hpp
  \brief Record library text format (.srl): parser and deterministic writer

  Grammar, line-oriented, `#` comments:

    recordlib K=6
    rec tt=HEX k=INT ands=INT depth=INT
    nI = AND(opA, opB)        # op: [!]xJ (input) or [!]nJ (node)
    out = [!]nJ|xJ
    end

  Truth tables are NPN-canonical under the toolkit's canonicalizer; hex is
  zero-padded to 2^k bits.
*/

#pragma once

#include <sstream>

#include "record_library.hpp"
#include "slf.hpp"

namespace synkit
{

namespace srl_detail
{

inline std::string tt_hex( uint64_t tt, uint32_t k )
{
  uint32_t digits = std::max( 1u, ( 1u << k ) / 4 );
  std::string s( digits, '0' );
  for ( uint32_t i = 0; i < digits; ++i )
  {
    uint32_t nib = ( tt >> ( 4 * ( digits - 1 - i ) ) ) & 0xf;
    s[i] = "0123456789abcdef"[nib];
  }
  return s;
}

inline uint32_t parse_operand( std::string tok, uint32_t k, uint32_t defined_nodes, int line )
{
  bool comp = false;
  if ( !tok.empty() && tok[0] == '!' )
  {
    comp = true;
    tok = tok.substr( 1 );
  }
  if ( tok.size() < 2 || ( tok[0] != 'x' && tok[0] != 'n' ) )
    throw syntax_error( line, 1, "operand of the form [!]xJ or [!]nJ" );
  uint32_t idx = 0;
  auto [p, ec] = std::from_chars( tok.data() + 1, tok.data() + tok.size(), idx );
  if ( ec != std::errc() || p != tok.data() + tok.size() )
    throw syntax_error( line, 1, "operand index" );
  if ( tok[0] == 'x' )
  {
    if ( idx >= k )
      throw semantic_error( line, "input x" + std::to_string( idx ) + " out of range" );
    return ( idx << 1 ) | ( comp ? 1 : 0 );
  }
  if ( idx >= defined_nodes )
    throw semantic_error( line, "node n" + std::to_string( idx ) + " not yet defined" );
  return ( ( k + idx ) << 1 ) | ( comp ? 1 : 0 );
}

inline std::string operand_str( uint32_t l, uint32_t k )
{
  uint32_t idx = l >> 1;
  std::string s = ( l & 1 ) ? "!" : "";
  if ( idx < k )
    return s + "x" + std::to_string( idx );
  return s + "n" + std::to_string( idx - k );
}

} // namespace srl_detail

inline record_library read_record_library( std::string_view text )
{
  using namespace srl_detail;
  std::istringstream is{ std::string( text ) };
  std::string raw;
  int ln = 0;
  bool seen_header = false, seen_end = false;
  record_library lib( 6 );
  std::optional<std::pair<uint64_t, record_structure>> open; // entry being read
  uint32_t claimed_ands = 0, claimed_depth = 0;
  bool have_out = false;

  auto close_entry = [&]() {
    if ( !open )
      return;
    if ( !have_out )
      throw semantic_error( ln, "record entry missing 'out =' line" );
    auto& [tt, s] = *open;
    if ( s.ands() != claimed_ands || s.depth() != claimed_depth )
      throw semantic_error( ln, "record header ands/depth do not match the structure" );
    auto canon = npn_canon( tt, s.k );
    if ( canon.canonical != tt )
      throw non_canonical_entry( "tt " + tt_hex( tt, s.k ) + " is not canonical" );
    if ( s.simulate() != tt )
      throw semantic_error( ln, "structure does not implement its truth table" );
    lib.offer( tt, s );
    open.reset();
    have_out = false;
  };

  while ( std::getline( is, raw ) )
  {
    ++ln;
    std::string line = slf_detail::strip( raw );
    if ( line.empty() )
      continue;
    if ( seen_end )
      throw syntax_error( ln, 1, "end of file after 'end'" );
    std::istringstream ls( line );
    std::string kw;
    ls >> kw;
    if ( kw == "recordlib" )
    {
      std::string kv;
      ls >> kv;
      if ( kv.rfind( "K=", 0 ) != 0 )
        throw syntax_error( ln, 1, "recordlib K=N" );
      uint32_t k = static_cast<uint32_t>( std::stoul( kv.substr( 2 ) ) );
      if ( k < 2 || k > 6 )
        throw semantic_error( ln, "K must be within [2, 6]" );
      lib = record_library( k );
      seen_header = true;
    }
    else if ( kw == "rec" )
    {
      if ( !seen_header )
        throw syntax_error( ln, 1, "'recordlib' header first" );
      close_entry();
      std::string tts, ks, as, ds;
      ls >> tts >> ks >> as >> ds;
      if ( tts.rfind( "tt=", 0 ) != 0 || ks.rfind( "k=", 0 ) != 0 || as.rfind( "ands=", 0 ) != 0 || ds.rfind( "depth=", 0 ) != 0 )
        throw syntax_error( ln, 1, "rec tt=HEX k=INT ands=INT depth=INT" );
      record_structure s;
      s.k = static_cast<uint32_t>( std::stoul( ks.substr( 2 ) ) );
      if ( s.k < 1 || s.k > lib.k_max() )
        throw semantic_error( ln, "entry arity outside [1, K]" );
      uint64_t tt = 0;
      for ( char c : tts.substr( 3 ) )
      {
        int v = c >= '0' && c <= '9' ? c - '0' : ( c >= 'a' && c <= 'f' ? c - 'a' + 10 : -1 );
        if ( v < 0 )
          throw syntax_error( ln, 1, "hex truth table" );
        tt = ( tt << 4 ) | static_cast<uint32_t>( v );
      }
      claimed_ands = static_cast<uint32_t>( std::stoul( as.substr( 5 ) ) );
      claimed_depth = static_cast<uint32_t>( std::stoul( ds.substr( 6 ) ) );
      open = { tt, std::move( s ) };
    }
    else if ( kw == "out" )
    {
      if ( !open )
        throw syntax_error( ln, 1, "'rec' before 'out'" );
      std::string eq, op;
      ls >> eq >> op;
      if ( eq != "=" )
        throw syntax_error( ln, 1, "'='" );
      open->second.out = parse_operand( op, open->second.k, open->second.ands(), ln );
      have_out = true;
    }
    else if ( kw == "end" )
    {
      close_entry();
      seen_end = true;
    }
    else if ( !kw.empty() && kw[0] == 'n' )
    {
      if ( !open )
        throw syntax_error( ln, 1, "'rec' before a node line" );
      uint32_t idx = 0;
      auto [p, ec] = std::from_chars( kw.data() + 1, kw.data() + kw.size(), idx );
      if ( ec != std::errc() || p != kw.data() + kw.size() || idx != open->second.ands() )
        throw semantic_error( ln, "nodes must be defined densely in order" );
      std::string eq, fn;
      ls >> eq >> fn;
      if ( eq != "=" || fn.rfind( "AND(", 0 ) != 0 )
        throw syntax_error( ln, 1, "nI = AND(opA, opB)" );
      std::string rest = fn.substr( 4 );
      std::string more;
      std::getline( ls, more );
      rest += more;
      auto close = rest.find( ')' );
      auto comma = rest.find( ',' );
      if ( close == std::string::npos || comma == std::string::npos || comma > close )
        throw syntax_error( ln, 1, "AND(opA, opB)" );
      auto trim = []( std::string s ) {
        size_t b = s.find_first_not_of( ' ' );
        size_t e = s.find_last_not_of( ' ' );
        return b == std::string::npos ? std::string() : s.substr( b, e - b + 1 );
      };
      record_structure::rnode nd;
      nd.f0 = parse_operand( trim( rest.substr( 0, comma ) ), open->second.k, open->second.ands(), ln );
      nd.f1 = parse_operand( trim( rest.substr( comma + 1, close - comma - 1 ) ), open->second.k, open->second.ands(), ln );
      open->second.nodes.push_back( nd );
    }
    else
    {
      throw syntax_error( ln, 1, "'recordlib', 'rec', node line, 'out' or 'end'" );
    }
  }
  if ( !seen_header || !seen_end )
    throw syntax_error( ln, 1, "'recordlib' ... 'end'" );
  return lib;
}

inline std::string write_record_library( record_library const& lib )
{
  using namespace srl_detail;
  std::ostringstream os;
  os << "recordlib K=" << lib.k_max() << "\n";
  for ( auto const& [key, s] : lib.entries() )
  {
    os << "rec tt=" << tt_hex( key.second, key.first ) << " k=" << key.first
       << " ands=" << s.ands() << " depth=" << s.depth() << "\n";
    for ( size_t i = 0; i < s.nodes.size(); ++i )
      os << "n" << i << " = AND(" << operand_str( s.nodes[i].f0, s.k ) << ", " << operand_str( s.nodes[i].f1, s.k ) << ")\n";
    os << "out = " << operand_str( s.out, s.k ) << "\n";
  }
  os << "end\n";
  return os.str();
}

} // namespace synkit
