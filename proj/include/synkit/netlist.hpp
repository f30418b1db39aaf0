/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file netlist.hpp
  \brief Netlist data model: typed cells over multi-bit nets, validation,
         topological traversal, and cell statistics
*/

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "common.hpp"

namespace synkit
{

enum class cell_kind
{
  NOT_,
  BUF,
  AND_,
  OR_,
  XOR_,
  NAND,
  NOR_,
  XNOR,
  MUX,
  DFF,
  SHIFTX,
  ADD,
  SUB,
  MUL,
  MACC,
  LIB
};

inline bool is_generic_gate( cell_kind k )
{
  switch ( k )
  {
  case cell_kind::NOT_:
  case cell_kind::BUF:
  case cell_kind::AND_:
  case cell_kind::OR_:
  case cell_kind::XOR_:
  case cell_kind::NAND:
  case cell_kind::NOR_:
  case cell_kind::XNOR:
  case cell_kind::MUX:
    return true;
  default:
    return false;
  }
}

inline bool is_word_level( cell_kind k )
{
  switch ( k )
  {
  case cell_kind::SHIFTX:
  case cell_kind::ADD:
  case cell_kind::SUB:
  case cell_kind::MUL:
  case cell_kind::MACC:
    return true;
  default:
    return false;
  }
}

inline std::string to_string( cell_kind k )
{
  switch ( k )
  {
  case cell_kind::NOT_: return "NOT";
  case cell_kind::BUF: return "BUF";
  case cell_kind::AND_: return "AND";
  case cell_kind::OR_: return "OR";
  case cell_kind::XOR_: return "XOR";
  case cell_kind::NAND: return "NAND";
  case cell_kind::NOR_: return "NOR";
  case cell_kind::XNOR: return "XNOR";
  case cell_kind::MUX: return "MUX";
  case cell_kind::DFF: return "DFF";
  case cell_kind::SHIFTX: return "SHIFTX";
  case cell_kind::ADD: return "ADD";
  case cell_kind::SUB: return "SUB";
  case cell_kind::MUL: return "MUL";
  case cell_kind::MACC: return "MACC";
  case cell_kind::LIB: return "LIB";
  }
  return "?";
}

inline std::optional<cell_kind> cell_kind_from_string( std::string const& s )
{
  static const std::map<std::string, cell_kind> m = {
      { "NOT", cell_kind::NOT_ }, { "BUF", cell_kind::BUF }, { "AND", cell_kind::AND_ }, { "OR", cell_kind::OR_ }, { "XOR", cell_kind::XOR_ }, { "NAND", cell_kind::NAND }, { "NOR", cell_kind::NOR_ }, { "XNOR", cell_kind::XNOR }, { "MUX", cell_kind::MUX }, { "DFF", cell_kind::DFF }, { "SHIFTX", cell_kind::SHIFTX }, { "ADD", cell_kind::ADD }, { "SUB", cell_kind::SUB }, { "MUL", cell_kind::MUL }, { "MACC", cell_kind::MACC } };
  auto it = m.find( s );
  if ( it == m.end() )
    return std::nullopt;
  return it->second;
}

enum class port_dir
{
  in,
  out
};

struct port
{
  std::string name;
  port_dir dir{ port_dir::in };
  uint32_t width{ 1 };
  net_id net{ 0 }; //!< backing net carrying the same name and width
};

struct net
{
  std::string name;
  uint32_t width{ 1 };
};

/*! \brief Contiguous slice of a net, bits [msb:lsb] (msb >= lsb). */
struct slice
{
  net_id net{ 0 };
  uint32_t msb{ 0 };
  uint32_t lsb{ 0 };

  uint32_t width() const { return msb - lsb + 1; }
  bool operator==( slice const& o ) const = default;
};

/*! \brief Run of constant bits, LSB first. */
struct const_run
{
  std::vector<bool> bits;
  bool operator==( const_run const& o ) const = default;
};

using segment = std::variant<slice, const_run>;

/*! \brief Single bit of a signal: either one net bit or a constant. */
struct bit_ref
{
  bool is_const{ true };
  bool value{ false };
  net_id net{ 0 };
  uint32_t index{ 0 };

  static bit_ref constant( bool v ) { return bit_ref{ true, v, 0, 0 }; }
  static bit_ref of_net( net_id n, uint32_t i ) { return bit_ref{ false, false, n, i }; }

  bool operator==( bit_ref const& o ) const
  {
    if ( is_const != o.is_const )
      return false;
    return is_const ? value == o.value : ( net == o.net && index == o.index );
  }
  bool operator<( bit_ref const& o ) const
  {
    if ( is_const != o.is_const )
      return is_const < o.is_const;
    if ( is_const )
      return value < o.value;
    return std::tie( net, index ) < std::tie( o.net, o.index );
  }
};

/*! \brief Signal expression: concatenation of net slices and constant runs.
 *
 * Segments are stored LSB first; bit 0 of the signal is bit `lsb` of the
 * first slice (or the first constant bit).
 */
struct signal_ref
{
  std::vector<segment> segments;

  signal_ref() = default;
  signal_ref( std::initializer_list<segment> segs ) : segments( segs ) {}

  static signal_ref whole( net_id n, uint32_t width )
  {
    signal_ref s;
    s.segments.push_back( slice{ n, width - 1, 0 } );
    return s;
  }

  static signal_ref constant( std::vector<bool> bits )
  {
    signal_ref s;
    s.segments.push_back( const_run{ std::move( bits ) } );
    return s;
  }

  static signal_ref constant_zero( uint32_t width )
  {
    return constant( std::vector<bool>( width, false ) );
  }

  static signal_ref of_bit( bit_ref b )
  {
    signal_ref s;
    if ( b.is_const )
      s.segments.push_back( const_run{ { b.value } } );
    else
      s.segments.push_back( slice{ b.net, b.index, b.index } );
    return s;
  }

  static signal_ref of_bits( std::vector<bit_ref> const& bits )
  {
    signal_ref s;
    for ( auto const& b : bits )
      s.append_bit( b );
    return s;
  }

  void append_bit( bit_ref b )
  {
    if ( !segments.empty() )
    {
      /* coalesce with the previous segment when contiguous */
      if ( b.is_const )
      {
        if ( auto* c = std::get_if<const_run>( &segments.back() ) )
        {
          c->bits.push_back( b.value );
          return;
        }
      }
      else if ( auto* sl = std::get_if<slice>( &segments.back() ) )
      {
        if ( sl->net == b.net && b.index == sl->msb + 1 )
        {
          sl->msb = b.index;
          return;
        }
      }
    }
    if ( b.is_const )
      segments.push_back( const_run{ { b.value } } );
    else
      segments.push_back( slice{ b.net, b.index, b.index } );
  }

  void append( signal_ref const& other )
  {
    for ( uint32_t i = 0; i < other.width(); ++i )
      append_bit( other.bit( i ) );
  }

  uint32_t width() const
  {
    uint32_t w = 0;
    for ( auto const& s : segments )
    {
      if ( auto* sl = std::get_if<slice>( &s ) )
        w += sl->width();
      else
        w += static_cast<uint32_t>( std::get<const_run>( s ).bits.size() );
    }
    return w;
  }

  bit_ref bit( uint32_t i ) const
  {
    for ( auto const& s : segments )
    {
      if ( auto* sl = std::get_if<slice>( &s ) )
      {
        if ( i < sl->width() )
          return bit_ref::of_net( sl->net, sl->lsb + i );
        i -= sl->width();
      }
      else
      {
        auto const& bits = std::get<const_run>( s ).bits;
        if ( i < bits.size() )
          return bit_ref::constant( bits[i] );
        i -= static_cast<uint32_t>( bits.size() );
      }
    }
    return bit_ref::constant( false );
  }

  std::vector<bit_ref> bits() const
  {
    std::vector<bit_ref> r;
    r.reserve( width() );
    for ( uint32_t i = 0; i < width(); ++i )
      r.push_back( bit( i ) );
    return r;
  }

  bool is_constant() const
  {
    for ( auto const& s : segments )
      if ( !std::holds_alternative<const_run>( s ) )
        return false;
    return true;
  }
};

struct cell
{
  cell_kind kind{ cell_kind::BUF };
  std::string name;
  std::string lib_cell;                      //!< library cell name, LIB kind only
  std::map<std::string, int64_t> params;     //!< width parameters of word-level kinds
  std::map<std::string, signal_ref> pins;

  int64_t param( std::string const& key ) const
  {
    auto it = params.find( key );
    return it == params.end() ? 0 : it->second;
  }
};

struct violation
{
  std::string rule;
  std::string subject;
  std::string message;
};

/*! \brief Pin signature entry: name, direction, and width rule. */
struct pin_sig
{
  std::string name;
  bool is_output;
  /* width: fixed value, or name of the width parameter */
  uint32_t fixed_width;      //!< used when param.empty()
  std::string width_param;
};

/*! \brief Pin and parameter schema of a cell kind (excluding LIB). */
inline std::vector<pin_sig> const& cell_signature( cell_kind k )
{
  static const std::vector<pin_sig> unary = { { "A", false, 1, "" }, { "Y", true, 1, "" } };
  static const std::vector<pin_sig> binary = { { "A", false, 1, "" }, { "B", false, 1, "" }, { "Y", true, 1, "" } };
  static const std::vector<pin_sig> mux = { { "A", false, 1, "" }, { "B", false, 1, "" }, { "S", false, 1, "" }, { "Y", true, 1, "" } };
  static const std::vector<pin_sig> dff = { { "D", false, 1, "" }, { "CLK", false, 1, "" }, { "Q", true, 1, "" } };
  static const std::vector<pin_sig> shiftx = { { "A", false, 0, "WA" }, { "S", false, 0, "WS" }, { "Y", true, 0, "WY" } };
  static const std::vector<pin_sig> arith = { { "A", false, 0, "WA" }, { "B", false, 0, "WB" }, { "Y", true, 0, "WY" } };
  static const std::vector<pin_sig> macc = { { "A", false, 0, "WA" }, { "B", false, 0, "WB" }, { "C", false, 0, "WC" }, { "D", false, 0, "WD" }, { "Y", true, 0, "WY" } };
  static const std::vector<pin_sig> none = {};

  switch ( k )
  {
  case cell_kind::NOT_:
  case cell_kind::BUF:
    return unary;
  case cell_kind::AND_:
  case cell_kind::OR_:
  case cell_kind::XOR_:
  case cell_kind::NAND:
  case cell_kind::NOR_:
  case cell_kind::XNOR:
    return binary;
  case cell_kind::MUX:
    return mux;
  case cell_kind::DFF:
    return dff;
  case cell_kind::SHIFTX:
    return shiftx;
  case cell_kind::ADD:
  case cell_kind::SUB:
  case cell_kind::MUL:
    return arith;
  case cell_kind::MACC:
    return macc;
  case cell_kind::LIB:
    return none;
  }
  return none;
}

inline std::vector<std::string> cell_param_schema( cell_kind k )
{
  std::vector<std::string> r;
  for ( auto const& p : cell_signature( k ) )
  {
    if ( !p.width_param.empty() )
      r.push_back( p.width_param );
  }
  return r;
}

class netlist
{
public:
  std::string name;
  std::vector<port> ports;
  std::map<net_id, net> nets;
  std::map<cell_id, cell> cells;

  net_id add_net( std::string const& n, uint32_t width )
  {
    net_id id = next_net_++;
    nets[id] = net{ n, width };
    return id;
  }

  net_id add_port( std::string const& n, port_dir dir, uint32_t width )
  {
    net_id id = add_net( n, width );
    ports.push_back( port{ n, dir, width, id } );
    return id;
  }

  cell_id add_cell( cell c )
  {
    cell_id id = next_cell_++;
    cells[id] = std::move( c );
    return id;
  }

  void remove_cell( cell_id id ) { cells.erase( id ); }
  void remove_net( net_id id ) { nets.erase( id ); }

  std::optional<net_id> find_net( std::string const& n ) const
  {
    for ( auto const& [id, nn] : nets )
    {
      if ( nn.name == n )
        return id;
    }
    return std::nullopt;
  }

  port const* find_port( std::string const& n ) const
  {
    for ( auto const& p : ports )
    {
      if ( p.name == n )
        return &p;
    }
    return nullptr;
  }

  /*! \brief Fresh net name not yet present, derived from `base`. */
  std::string fresh_net_name( std::string const& base )
  {
    std::string cand = base;
    uint32_t k = 0;
    while ( find_net( cand ).has_value() || used_net_names_.count( cand ) != 0 )
      cand = base + "_" + std::to_string( k++ );
    used_net_names_.insert( cand );
    return cand;
  }

  uint32_t pin_width( cell const& c, pin_sig const& sig ) const
  {
    if ( sig.width_param.empty() )
      return sig.fixed_width;
    return static_cast<uint32_t>( c.param( sig.width_param ) );
  }

  bool operator==( netlist const& ) const = delete;

private:
  net_id next_net_{ 0 };
  cell_id next_cell_{ 0 };
  std::set<std::string> used_net_names_;
};

/*! \brief Driver of one net bit. */
struct bit_driver
{
  enum class kind_t
  {
    none,
    input_port,
    cell_output
  } kind{ kind_t::none };
  cell_id cell{ 0 };
  std::string pin;
  uint32_t pin_bit{ 0 };
};

/*! \brief Per-bit driver table for all nets; also reports driver conflicts. */
class driver_map
{
public:
  driver_map( netlist const& n, std::vector<violation>* out = nullptr )
  {
    for ( auto const& [id, nn] : n.nets )
      table_[id].resize( nn.width );

    for ( auto const& p : n.ports )
    {
      if ( p.dir == port_dir::in )
      {
        auto& v = table_[p.net];
        for ( auto& d : v )
          d = bit_driver{ bit_driver::kind_t::input_port, 0, p.name, 0 };
      }
    }

    for ( auto const& [cid, c] : n.cells )
    {
      for ( auto const& sig : output_pins( n, c ) )
      {
        auto it = c.pins.find( sig );
        if ( it == c.pins.end() )
          continue;
        auto const& sr = it->second;
        for ( uint32_t i = 0; i < sr.width(); ++i )
        {
          auto b = sr.bit( i );
          if ( b.is_const )
          {
            if ( out )
              out->push_back( { "const-driven-output", c.name, "output pin " + sig + " connects to a constant" } );
            continue;
          }
          auto t = table_.find( b.net );
          if ( t == table_.end() || b.index >= t->second.size() )
            continue;
          auto& d = t->second[b.index];
          if ( d.kind != bit_driver::kind_t::none )
          {
            if ( out )
              out->push_back( { "multiple-driver", n.nets.at( b.net ).name, "bit " + std::to_string( b.index ) + " driven more than once (cell " + c.name + ")" } );
          }
          else
          {
            d = bit_driver{ bit_driver::kind_t::cell_output, cid, sig, i };
          }
        }
      }
    }
  }

  bit_driver const& at( net_id n, uint32_t bit ) const
  {
    static const bit_driver none{};
    auto it = table_.find( n );
    if ( it == table_.end() || bit >= it->second.size() )
      return none;
    return it->second[bit];
  }

  /*! \brief Output pin names of a cell (LIB cells: every pin named like an output in `lib_outputs`). */
  static std::vector<std::string> output_pins( netlist const& n, cell const& c )
  {
    (void)n;
    std::vector<std::string> r;
    if ( c.kind == cell_kind::LIB )
    {
      /* convention: LIB output pin is the one named "Y"; libraries read from
         .slf are normalized to this on mapping */
      if ( c.pins.count( "Y" ) )
        r.push_back( "Y" );
      return r;
    }
    for ( auto const& sig : cell_signature( c.kind ) )
    {
      if ( sig.is_output )
        r.push_back( sig.name );
    }
    return r;
  }

private:
  std::map<net_id, std::vector<bit_driver>> table_;
};

namespace detail
{

inline void collect_input_bits( netlist const& n, cell const& c, std::vector<bit_ref>& out )
{
  if ( c.kind == cell_kind::LIB )
  {
    for ( auto const& [pin, sr] : c.pins )
    {
      if ( pin == "Y" )
        continue;
      for ( auto b : sr.bits() )
        out.push_back( b );
    }
    return;
  }
  for ( auto const& sig : cell_signature( c.kind ) )
  {
    if ( sig.is_output )
      continue;
    auto it = c.pins.find( sig.name );
    if ( it == c.pins.end() )
      continue;
    for ( auto b : it->second.bits() )
      out.push_back( b );
  }
}

} // namespace detail

/*! \brief Checks all structural invariants; returns the list of violations.
 *
 * An empty result is the precondition for every pass in the toolkit.
 */
inline std::vector<violation> validate( netlist const& n )
{
  std::vector<violation> v;

  /* unique names */
  std::set<std::string> seen;
  for ( auto const& p : n.ports )
  {
    if ( !seen.insert( p.name ).second )
      v.push_back( { "duplicate-port", p.name, "port name declared twice" } );
  }
  seen.clear();
  for ( auto const& [id, nn] : n.nets )
  {
    if ( nn.width < 1 )
      v.push_back( { "zero-width-net", nn.name, "net width must be >= 1" } );
    if ( !seen.insert( nn.name ).second )
      v.push_back( { "duplicate-net", nn.name, "net name declared twice" } );
  }
  seen.clear();
  for ( auto const& [id, c] : n.cells )
  {
    if ( !seen.insert( c.name ).second )
      v.push_back( { "duplicate-cell", c.name, "cell name declared twice" } );
  }

  /* ports backed by nets of same width */
  for ( auto const& p : n.ports )
  {
    auto it = n.nets.find( p.net );
    if ( it == n.nets.end() )
      v.push_back( { "port-net-missing", p.name, "port has no backing net" } );
    else if ( it->second.width != p.width || it->second.name != p.name )
      v.push_back( { "port-net-mismatch", p.name, "backing net differs in name or width" } );
  }

  /* cell pin/param schemas */
  for ( auto const& [id, c] : n.cells )
  {
    /* segment sanity (applies to every pin incl. LIB) */
    for ( auto const& [pin, sr] : c.pins )
    {
      for ( auto const& seg : sr.segments )
      {
        if ( auto* sl = std::get_if<slice>( &seg ) )
        {
          auto it = n.nets.find( sl->net );
          if ( it == n.nets.end() )
          {
            v.push_back( { "dangling-net", c.name, "pin " + pin + " references missing net" } );
          }
          else if ( sl->msb < sl->lsb || sl->msb >= it->second.width )
          {
            v.push_back( { "slice-out-of-range", c.name, "pin " + pin + " slice [" + std::to_string( sl->msb ) + ":" + std::to_string( sl->lsb ) + "] outside net " + it->second.name } );
          }
        }
      }
    }

    if ( c.kind == cell_kind::LIB )
    {
      if ( c.lib_cell.empty() )
        v.push_back( { "lib-cell-unnamed", c.name, "LIB cell has no library cell name" } );
      for ( auto const& [pin, sr] : c.pins )
      {
        if ( sr.width() != 1 )
          v.push_back( { "width-mismatch", c.name, "LIB pin " + pin + " must be 1 bit" } );
      }
      if ( !c.pins.count( "Y" ) )
        v.push_back( { "lib-missing-output", c.name, "LIB cell must expose output pin Y" } );
      continue;
    }

    auto const& sigs = cell_signature( c.kind );
    auto schema = cell_param_schema( c.kind );
    for ( auto const& key : schema )
    {
      if ( !c.params.count( key ) )
        v.push_back( { "missing-param", c.name, "parameter " + key + " required" } );
      else if ( c.param( key ) < 1 )
        v.push_back( { "bad-param", c.name, "parameter " + key + " must be >= 1" } );
    }
    for ( auto const& [key, val] : c.params )
    {
      if ( std::find( schema.begin(), schema.end(), key ) == schema.end() )
        v.push_back( { "unknown-param", c.name, "parameter " + key + " not in schema" } );
    }
    for ( auto const& sig : sigs )
    {
      auto it = c.pins.find( sig.name );
      if ( it == c.pins.end() )
      {
        v.push_back( { "missing-pin", c.name, "pin " + sig.name + " not connected" } );
        continue;
      }
      uint32_t want = n.pin_width( c, sig );
      if ( want >= 1 && it->second.width() != want )
        v.push_back( { "width-mismatch", c.name, "pin " + sig.name + " has width " + std::to_string( it->second.width() ) + ", expected " + std::to_string( want ) } );
    }
    for ( auto const& [pin, sr] : c.pins )
    {
      bool known = false;
      for ( auto const& sig : sigs )
        known |= sig.name == pin;
      if ( !known )
        v.push_back( { "unknown-pin", c.name, "pin " + pin + " not in signature" } );
    }

    if ( c.kind == cell_kind::SHIFTX && c.param( "WY" ) > c.param( "WA" ) )
      v.push_back( { "shiftx-width", c.name, "WY must be <= WA" } );
    if ( c.kind == cell_kind::MACC )
    {
      int64_t want = std::max( { c.param( "WA" ) + c.param( "WB" ), c.param( "WC" ), c.param( "WD" ) } ) + 2;
      if ( c.param( "WY" ) != want )
        v.push_back( { "macc-width", c.name, "WY must be max(WA+WB, WC, WD) + 2 = " + std::to_string( want ) } );
    }
  }

  /* driver analysis */
  driver_map dm( n, &v );
  std::map<net_id, std::vector<bool>> read;
  for ( auto const& [id, nn] : n.nets )
    read[id].resize( nn.width, false );
  for ( auto const& [id, c] : n.cells )
  {
    std::vector<bit_ref> ins;
    detail::collect_input_bits( n, c, ins );
    for ( auto const& b : ins )
    {
      if ( !b.is_const && read.count( b.net ) && b.index < read[b.net].size() )
        read[b.net][b.index] = true;
    }
  }
  for ( auto const& p : n.ports )
  {
    if ( p.dir == port_dir::out )
    {
      for ( uint32_t i = 0; i < p.width; ++i )
        read[p.net][i] = true;
    }
  }
  for ( auto const& [id, nn] : n.nets )
  {
    for ( uint32_t i = 0; i < nn.width; ++i )
    {
      if ( dm.at( id, i ).kind == bit_driver::kind_t::none && read[id][i] )
        v.push_back( { "undriven", nn.name, "bit " + std::to_string( i ) + " is read but has no driver" } );
    }
  }

  /* combinational acyclicity; reuse the traversal below */
  struct local
  {
    static bool acyclic( netlist const& n, driver_map const& dm )
    {
      std::map<cell_id, uint32_t> indeg;
      std::map<cell_id, std::vector<cell_id>> succ;
      for ( auto const& [cid, c] : n.cells )
        indeg[cid] = 0;
      for ( auto const& [cid, c] : n.cells )
      {
        if ( c.kind == cell_kind::DFF )
          continue; // DFF is a sink for ordering purposes
        std::vector<bit_ref> ins;
        detail::collect_input_bits( n, c, ins );
        std::set<cell_id> preds;
        for ( auto const& b : ins )
        {
          if ( b.is_const )
            continue;
          auto const& d = dm.at( b.net, b.index );
          if ( d.kind == bit_driver::kind_t::cell_output && n.cells.at( d.cell ).kind != cell_kind::DFF )
            preds.insert( d.cell );
        }
        for ( auto p : preds )
        {
          succ[p].push_back( cid );
          ++indeg[cid];
        }
      }
      std::priority_queue<cell_id, std::vector<cell_id>, std::greater<>> q;
      for ( auto const& [cid, d] : indeg )
        if ( d == 0 )
          q.push( cid );
      size_t done = 0;
      while ( !q.empty() )
      {
        auto c = q.top();
        q.pop();
        ++done;
        for ( auto s : succ[c] )
          if ( --indeg[s] == 0 )
            q.push( s );
      }
      return done == n.cells.size();
    }
  };
  if ( !local::acyclic( n, dm ) )
    v.push_back( { "combinational-loop", n.name, "combinational cell graph has a cycle" } );

  return v;
}

/*! \brief Topological order over the combinational cell graph.
 *
 * DFFs rank as sources (their Q pins are cut points). Deterministic:
 * ties broken by ascending cell id.
 *
 * \throws combinational_loop if the combinational graph is cyclic.
 */
inline std::vector<cell_id> topo_order( netlist const& n )
{
  driver_map dm( n );
  std::map<cell_id, uint32_t> indeg;
  std::map<cell_id, std::vector<cell_id>> succ;
  for ( auto const& [cid, c] : n.cells )
    indeg[cid] = 0;
  for ( auto const& [cid, c] : n.cells )
  {
    if ( c.kind == cell_kind::DFF )
      continue;
    std::vector<bit_ref> ins;
    detail::collect_input_bits( n, c, ins );
    std::set<cell_id> preds;
    for ( auto const& b : ins )
    {
      if ( b.is_const )
        continue;
      auto const& d = dm.at( b.net, b.index );
      if ( d.kind == bit_driver::kind_t::cell_output && n.cells.at( d.cell ).kind != cell_kind::DFF )
        preds.insert( d.cell );
    }
    for ( auto p : preds )
    {
      succ[p].push_back( cid );
      ++indeg[cid];
    }
  }
  std::priority_queue<cell_id, std::vector<cell_id>, std::greater<>> q;
  for ( auto const& [cid, d] : indeg )
    if ( d == 0 )
      q.push( cid );
  std::vector<cell_id> order;
  order.reserve( n.cells.size() );
  while ( !q.empty() )
  {
    auto c = q.top();
    q.pop();
    order.push_back( c );
    for ( auto s : succ[c] )
      if ( --indeg[s] == 0 )
        q.push( s );
  }
  if ( order.size() != n.cells.size() )
  {
    std::vector<cell_id> cycle;
    for ( auto const& [cid, d] : indeg )
      if ( d > 0 )
        cycle.push_back( cid );
    throw combinational_loop( cycle );
  }
  return order;
}

struct netlist_stats
{
  std::map<cell_kind, uint32_t> per_kind;
  std::map<std::string, uint32_t> per_lib_cell;
  uint32_t generic_gates{ 0 };
  uint32_t total{ 0 };

  uint32_t count( cell_kind k ) const
  {
    auto it = per_kind.find( k );
    return it == per_kind.end() ? 0 : it->second;
  }
};

inline netlist_stats stats( netlist const& n )
{
  netlist_stats s;
  for ( auto const& [id, c] : n.cells )
  {
    ++s.per_kind[c.kind];
    ++s.total;
    if ( is_generic_gate( c.kind ) )
      ++s.generic_gates;
    if ( c.kind == cell_kind::LIB )
      ++s.per_lib_cell[c.lib_cell];
  }
  return s;
}

/*! \brief Logic depth in generic-cell levels (each generic cell counts 1).
 *
 * Word-level and LIB cells also count one level each; DFF boundaries reset
 * the depth.
 */
inline uint32_t logic_depth( netlist const& n )
{
  auto order = topo_order( n );
  driver_map dm( n );
  std::map<net_id, std::vector<uint32_t>> level;
  for ( auto const& [id, nn] : n.nets )
    level[id].assign( nn.width, 0 );

  uint32_t max_level = 0;
  for ( auto cid : order )
  {
    auto const& c = n.cells.at( cid );
    if ( c.kind == cell_kind::DFF )
      continue;
    std::vector<bit_ref> ins;
    detail::collect_input_bits( n, c, ins );
    uint32_t in_lvl = 0;
    for ( auto const& b : ins )
    {
      if ( !b.is_const )
        in_lvl = std::max( in_lvl, level[b.net][b.index] );
    }
    uint32_t out_lvl = in_lvl + 1;
    max_level = std::max( max_level, out_lvl );
    for ( auto const& pin : driver_map::output_pins( n, c ) )
    {
      auto it = c.pins.find( pin );
      if ( it == c.pins.end() )
        continue;
      for ( auto b : it->second.bits() )
      {
        if ( !b.is_const )
          level[b.net][b.index] = out_lvl;
      }
    }
  }
  return max_level;
}

/*! \brief Drops nets that no pin references and no port backs. */
inline void remove_unused_nets( netlist& n )
{
  std::set<net_id> used;
  for ( auto const& p : n.ports )
    used.insert( p.net );
  for ( auto const& [cid, c] : n.cells )
  {
    for ( auto const& [pin, sr] : c.pins )
    {
      for ( auto const& seg : sr.segments )
      {
        if ( auto* sl = std::get_if<slice>( &seg ) )
          used.insert( sl->net );
      }
    }
  }
  std::vector<net_id> drop;
  for ( auto const& [id, nn] : n.nets )
    if ( !used.count( id ) )
      drop.push_back( id );
  for ( auto id : drop )
    n.remove_net( id );
}

/*! \brief Structural equality: same ports, nets (by name), and cells (by name)
 *         with identical connectivity expressed in net names.
 */
inline bool structurally_equal( netlist const& a, netlist const& b )
{
  if ( a.name != b.name || a.ports.size() != b.ports.size() || a.nets.size() != b.nets.size() || a.cells.size() != b.cells.size() )
    return false;
  for ( size_t i = 0; i < a.ports.size(); ++i )
  {
    if ( a.ports[i].name != b.ports[i].name || a.ports[i].dir != b.ports[i].dir || a.ports[i].width != b.ports[i].width )
      return false;
  }
  std::map<std::string, uint32_t> wa, wb;
  for ( auto const& [id, n] : a.nets )
    wa[n.name] = n.width;
  for ( auto const& [id, n] : b.nets )
    wb[n.name] = n.width;
  if ( wa != wb )
    return false;

  auto key_of = []( netlist const& nl, cell const& c ) {
    std::string k = to_string( c.kind ) + "|" + c.lib_cell + "|" + c.name;
    for ( auto const& [p, v] : c.params )
      k += "|" + p + "=" + std::to_string( v );
    for ( auto const& [p, sr] : c.pins )
    {
      k += "|" + p + ":";
      for ( uint32_t i = 0; i < sr.width(); ++i )
      {
        auto bit = sr.bit( i );
        if ( bit.is_const )
          k += bit.value ? "1" : "0";
        else
          k += "(" + nl.nets.at( bit.net ).name + "[" + std::to_string( bit.index ) + "])";
      }
    }
    return k;
  };
  std::multiset<std::string> ka, kb;
  for ( auto const& [id, c] : a.cells )
    ka.insert( key_of( a, c ) );
  for ( auto const& [id, c] : b.cells )
    kb.insert( key_of( b, c ) );
  return ka == kb;
}

/*! \brief Pseudo-combinational view: each DFF becomes an input port (its Q
 *         net) and an output port (its D cone), clock pins dropped.
 *
 * All combinational analyses (simulation, miters, structural hashing) use
 * this view so registers act as cut points.
 */
inline netlist comb_view( netlist const& n )
{
  bool has_dff = false;
  for ( auto const& [id, c] : n.cells )
    has_dff |= c.kind == cell_kind::DFF;
  if ( !has_dff )
    return n;

  netlist r;
  r.name = n.name;
  std::map<net_id, net_id> net_map;
  for ( auto const& p : n.ports )
    net_map[p.net] = r.add_port( p.name, p.dir, p.width );
  for ( auto const& [id, nn] : n.nets )
  {
    if ( !net_map.count( id ) )
      net_map[id] = r.add_net( nn.name, nn.width );
  }
  auto remap = [&]( signal_ref const& sr ) {
    signal_ref out;
    for ( auto const& seg : sr.segments )
    {
      if ( auto* sl = std::get_if<slice>( &seg ) )
        out.segments.push_back( slice{ net_map.at( sl->net ), sl->msb, sl->lsb } );
      else
        out.segments.push_back( seg );
    }
    return out;
  };

  uint32_t dff_idx = 0;
  for ( auto const& [id, c] : n.cells )
  {
    if ( c.kind == cell_kind::DFF )
    {
      /* Q side: promote the driven net bit to a pseudo input */
      auto qb = c.pins.at( "Q" ).bit( 0 );
      std::string qname = "dffq__" + c.name;
      net_id qn = r.add_port( qname, port_dir::in, 1 );
      /* rewire the original q bit to the new port net via a buffer */
      cell buf;
      buf.kind = cell_kind::BUF;
      buf.name = "dffq_buf__" + c.name;
      buf.pins["A"] = signal_ref::whole( qn, 1 );
      buf.pins["Y"] = remap( signal_ref::of_bit( qb ) );
      r.add_cell( std::move( buf ) );

      /* D side: pseudo output */
      std::string dname = "dffd__" + c.name;
      net_id dn = r.add_port( dname, port_dir::out, 1 );
      cell dbuf;
      dbuf.kind = cell_kind::BUF;
      dbuf.name = "dffd_buf__" + c.name;
      dbuf.pins["A"] = remap( c.pins.at( "D" ) );
      dbuf.pins["Y"] = signal_ref::whole( dn, 1 );
      r.add_cell( std::move( dbuf ) );
      ++dff_idx;
      continue;
    }
    cell cc = c;
    for ( auto& [pin, sr] : cc.pins )
      sr = remap( sr );
    r.add_cell( std::move( cc ) );
  }
  (void)dff_idx;
  return r;
}

} // namespace synkit
