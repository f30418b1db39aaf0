/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file sim.hpp
  \brief 64-lane bit-parallel netlist simulation with reference semantics for
         word-level cells

  DFF Q bits are treated as primary inputs and D cones as primary outputs
  (the simulator works on the pseudo-combinational view). SHIFTX reads 0 for
  out-of-range positions; ADD/SUB/MUL/MACC follow arbitrary-precision
  unsigned semantics truncated to the output width.
*/

#pragma once

#include <map>
#include <string>
#include <vector>

#include "cell_library.hpp"
#include "netlist.hpp"

namespace synkit
{

/*! \brief Assignment of one value per primary input bit (DFF Q included). */
struct sim_vector
{
  std::map<std::string, std::vector<bool>> values; //!< port name -> bits, LSB first
};

/*! \brief Reusable evaluation engine; one instance per netlist. */
class simulator
{
public:
  explicit simulator( netlist const& n, cell_library const* lib = nullptr )
      : nl_( comb_view( n ) ), lib_( lib ), order_( topo_order( nl_ ) )
  {
    for ( auto const& [id, nn] : nl_.nets )
      values_[id].assign( nn.width, 0 );
  }

  netlist const& view() const { return nl_; }

  std::vector<port const*> input_ports() const
  {
    std::vector<port const*> r;
    for ( auto const& p : nl_.ports )
      if ( p.dir == port_dir::in )
        r.push_back( &p );
    return r;
  }

  std::vector<port const*> output_ports() const
  {
    std::vector<port const*> r;
    for ( auto const& p : nl_.ports )
      if ( p.dir == port_dir::out )
        r.push_back( &p );
    return r;
  }

  uint32_t total_input_bits() const
  {
    uint32_t n = 0;
    for ( auto const* p : input_ports() )
      n += p->width;
    return n;
  }

  /*! \brief Runs one 64-lane batch. `inputs` maps port name -> per-bit lane
   *         words; outputs are returned the same way.
   */
  std::map<std::string, std::vector<uint64_t>> run( std::map<std::string, std::vector<uint64_t>> const& inputs )
  {
    for ( auto const& p : nl_.ports )
    {
      if ( p.dir != port_dir::in )
        continue;
      auto it = inputs.find( p.name );
      auto& v = values_[p.net];
      for ( uint32_t i = 0; i < p.width; ++i )
        v[i] = ( it != inputs.end() && i < it->second.size() ) ? it->second[i] : 0;
    }

    for ( auto cid : order_ )
      eval_cell( nl_.cells.at( cid ) );

    std::map<std::string, std::vector<uint64_t>> out;
    for ( auto const& p : nl_.ports )
    {
      if ( p.dir != port_dir::out )
        continue;
      out[p.name] = values_[p.net];
    }
    return out;
  }

  /*! \brief Scalar convenience wrapper around one lane. */
  std::map<std::string, std::vector<bool>> run_scalar( sim_vector const& v )
  {
    std::map<std::string, std::vector<uint64_t>> in;
    for ( auto const& [name, bits] : v.values )
    {
      auto& w = in[name];
      w.resize( bits.size() );
      for ( size_t i = 0; i < bits.size(); ++i )
        w[i] = bits[i] ? ~uint64_t( 0 ) : 0;
    }
    auto lanes = run( in );
    std::map<std::string, std::vector<bool>> out;
    for ( auto const& [name, words] : lanes )
    {
      auto& bits = out[name];
      bits.resize( words.size() );
      for ( size_t i = 0; i < words.size(); ++i )
        bits[i] = words[i] & 1;
    }
    return out;
  }

private:
  uint64_t read_bit( bit_ref b ) const
  {
    if ( b.is_const )
      return b.value ? ~uint64_t( 0 ) : 0;
    return values_.at( b.net )[b.index];
  }

  uint64_t read_pin_bit( cell const& c, std::string const& pin, uint32_t i = 0 ) const
  {
    return read_bit( c.pins.at( pin ).bit( i ) );
  }

  void write_pin( cell const& c, std::string const& pin, std::vector<uint64_t> const& words )
  {
    auto const& sr = c.pins.at( pin );
    for ( uint32_t i = 0; i < sr.width(); ++i )
    {
      auto b = sr.bit( i );
      if ( !b.is_const )
        values_[b.net][b.index] = i < words.size() ? words[i] : 0;
    }
  }

  std::vector<uint64_t> read_pin( cell const& c, std::string const& pin ) const
  {
    auto const& sr = c.pins.at( pin );
    std::vector<uint64_t> r( sr.width() );
    for ( uint32_t i = 0; i < sr.width(); ++i )
      r[i] = read_bit( sr.bit( i ) );
    return r;
  }

  void eval_cell( cell const& c )
  {
    switch ( c.kind )
    {
    case cell_kind::NOT_:
      write_pin( c, "Y", { ~read_pin_bit( c, "A" ) } );
      return;
    case cell_kind::BUF:
      write_pin( c, "Y", { read_pin_bit( c, "A" ) } );
      return;
    case cell_kind::AND_:
      write_pin( c, "Y", { read_pin_bit( c, "A" ) & read_pin_bit( c, "B" ) } );
      return;
    case cell_kind::OR_:
      write_pin( c, "Y", { read_pin_bit( c, "A" ) | read_pin_bit( c, "B" ) } );
      return;
    case cell_kind::XOR_:
      write_pin( c, "Y", { read_pin_bit( c, "A" ) ^ read_pin_bit( c, "B" ) } );
      return;
    case cell_kind::NAND:
      write_pin( c, "Y", { ~( read_pin_bit( c, "A" ) & read_pin_bit( c, "B" ) ) } );
      return;
    case cell_kind::NOR_:
      write_pin( c, "Y", { ~( read_pin_bit( c, "A" ) | read_pin_bit( c, "B" ) ) } );
      return;
    case cell_kind::XNOR:
      write_pin( c, "Y", { ~( read_pin_bit( c, "A" ) ^ read_pin_bit( c, "B" ) ) } );
      return;
    case cell_kind::MUX:
    {
      uint64_t s = read_pin_bit( c, "S" );
      write_pin( c, "Y", { ( read_pin_bit( c, "B" ) & s ) | ( read_pin_bit( c, "A" ) & ~s ) } );
      return;
    }
    case cell_kind::DFF:
      return; // boundary; Q fed externally via comb_view ports
    case cell_kind::SHIFTX:
      eval_shiftx( c );
      return;
    case cell_kind::ADD:
    case cell_kind::SUB:
    case cell_kind::MUL:
      eval_arith2( c );
      return;
    case cell_kind::MACC:
      eval_macc( c );
      return;
    case cell_kind::LIB:
      eval_lib( c );
      return;
    }
  }

  void eval_shiftx( cell const& c )
  {
    uint32_t wa = static_cast<uint32_t>( c.param( "WA" ) );
    uint32_t ws = static_cast<uint32_t>( c.param( "WS" ) );
    uint32_t wy = static_cast<uint32_t>( c.param( "WY" ) );
    auto a = read_pin( c, "A" );
    auto s = read_pin( c, "S" );
    std::vector<uint64_t> y( wy, 0 );
    for ( uint32_t lane = 0; lane < 64; ++lane )
    {
      uint64_t mask = uint64_t( 1 ) << lane;
      uint64_t sv = 0;
      bool huge = false;
      for ( uint32_t i = 0; i < ws; ++i )
      {
        if ( s[i] & mask )
        {
          if ( i >= 63 )
            huge = true;
          else
            sv |= uint64_t( 1 ) << i;
        }
      }
      if ( huge )
        continue; // shift amount >= 2^63: everything reads 0
      for ( uint32_t j = 0; j < wy; ++j )
      {
        uint64_t idx = sv + j;
        if ( idx < wa && ( a[static_cast<uint32_t>( idx )] & mask ) )
          y[j] |= mask;
      }
    }
    write_pin( c, "Y", y );
  }

  static wide_uint gather( std::vector<uint64_t> const& bits, uint32_t lane )
  {
    wide_uint v( static_cast<uint32_t>( bits.size() ) );
    for ( uint32_t i = 0; i < bits.size(); ++i )
      v.set_bit( i, ( bits[i] >> lane ) & 1 );
    return v;
  }

  void eval_arith2( cell const& c )
  {
    uint32_t wy = static_cast<uint32_t>( c.param( "WY" ) );
    auto a = read_pin( c, "A" );
    auto b = read_pin( c, "B" );
    std::vector<uint64_t> y( wy, 0 );
    for ( uint32_t lane = 0; lane < 64; ++lane )
    {
      wide_uint av = gather( a, lane );
      wide_uint bv = gather( b, lane );
      wide_uint r( wy );
      switch ( c.kind )
      {
      case cell_kind::ADD:
        r = wide_uint::add( av, bv, wy );
        break;
      case cell_kind::SUB:
        r = wide_uint::sub( av, bv, wy );
        break;
      default:
        r = wide_uint::mul( av, bv, wy );
        break;
      }
      for ( uint32_t i = 0; i < wy; ++i )
      {
        if ( r.bit( i ) )
          y[i] |= uint64_t( 1 ) << lane;
      }
    }
    write_pin( c, "Y", y );
  }

  void eval_macc( cell const& c )
  {
    uint32_t wy = static_cast<uint32_t>( c.param( "WY" ) );
    auto a = read_pin( c, "A" );
    auto b = read_pin( c, "B" );
    auto cc = read_pin( c, "C" );
    auto d = read_pin( c, "D" );
    std::vector<uint64_t> y( wy, 0 );
    for ( uint32_t lane = 0; lane < 64; ++lane )
    {
      wide_uint r = wide_uint::mul( gather( a, lane ), gather( b, lane ), wy );
      r = wide_uint::add( r, gather( cc, lane ), wy );
      r = wide_uint::add( r, gather( d, lane ), wy );
      for ( uint32_t i = 0; i < wy; ++i )
      {
        if ( r.bit( i ) )
          y[i] |= uint64_t( 1 ) << lane;
      }
    }
    write_pin( c, "Y", y );
  }

  void eval_lib( cell const& c )
  {
    if ( !lib_ )
      throw unmapped_cell( "LIB cell '" + c.name + "' simulated without a cell library" );
    auto* def = lib_->find( c.lib_cell );
    if ( !def )
      throw unmapped_cell( "library has no cell '" + c.lib_cell + "'" );
    std::map<std::string, uint64_t> vals;
    for ( auto const& [pin, sr] : c.pins )
    {
      if ( pin != "Y" )
        vals[pin] = read_bit( sr.bit( 0 ) );
    }
    write_pin( c, "Y", { def->function->eval( vals ) } );
  }

  netlist nl_;
  cell_library const* lib_;
  std::vector<cell_id> order_;
  std::map<net_id, std::vector<uint64_t>> values_;
};

/*! \brief Single-vector reference simulation. */
inline std::map<std::string, std::vector<bool>> simulate( netlist const& n, sim_vector const& v, cell_library const* lib = nullptr )
{
  simulator s( n, lib );
  return s.run_scalar( v );
}

} // namespace synkit
