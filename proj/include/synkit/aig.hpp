/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file aig.hpp
  \brief Structurally hashed and-inverter graph and the netlist bridge

  Nodes are two-input ANDs with optionally complemented fanin edges; node 0
  is constant false and the first `num_pis` nodes are primary inputs. The
  node array is topological by construction. DFF boundaries become extra
  PI/PO pairs through the pseudo-combinational view and are reinstated on
  conversion back to a netlist.
*/

#pragma once

#include <unordered_map>

#include "netlist.hpp"

namespace synkit
{

using aig_lit = uint32_t; //!< (node << 1) | complement

inline aig_lit make_lit( uint32_t node, bool comp ) { return ( node << 1 ) | ( comp ? 1 : 0 ); }
inline uint32_t lit_node( aig_lit l ) { return l >> 1; }
inline bool lit_comp( aig_lit l ) { return l & 1; }
inline aig_lit lit_not( aig_lit l ) { return l ^ 1; }

inline constexpr aig_lit aig_false = 0;
inline constexpr aig_lit aig_true = 1;

class aig
{
public:
  struct node
  {
    aig_lit fan0{ 0 }; //!< fan0 <= fan1 after normalization
    aig_lit fan1{ 0 };
  };

  aig() { nodes_.push_back( {} ); } // node 0: constant false

  uint32_t add_pi()
  {
    nodes_.push_back( {} );
    ++num_pis_;
    return static_cast<uint32_t>( nodes_.size() - 1 );
  }

  uint32_t num_pis() const { return num_pis_; }
  uint32_t num_nodes() const { return static_cast<uint32_t>( nodes_.size() ); }
  uint32_t num_ands() const { return static_cast<uint32_t>( nodes_.size() ) - 1 - num_pis_; }
  bool is_pi( uint32_t n ) const { return n >= 1 && n <= num_pis_; }
  bool is_and( uint32_t n ) const { return n > num_pis_; }
  node const& at( uint32_t n ) const { return nodes_[n]; }

  std::vector<aig_lit> const& outputs() const { return outputs_; }
  void add_output( aig_lit l ) { outputs_.push_back( l ); }
  void set_output( uint32_t i, aig_lit l ) { outputs_[i] = l; }

  /*! \brief Hashed AND with the trivial one-level rules. */
  aig_lit and_( aig_lit a, aig_lit b )
  {
    if ( a > b )
      std::swap( a, b );
    if ( a == aig_false )
      return aig_false;
    if ( a == aig_true )
      return b;
    if ( a == b )
      return a;
    if ( a == lit_not( b ) )
      return aig_false;
    uint64_t key = ( uint64_t( a ) << 32 ) | b;
    auto it = strash_.find( key );
    if ( it != strash_.end() )
      return make_lit( it->second, false );
    nodes_.push_back( node{ a, b } );
    uint32_t id = static_cast<uint32_t>( nodes_.size() - 1 );
    strash_[key] = id;
    return make_lit( id, false );
  }

  /*! \brief AND with the one-level absorption window: x & (x & y) = x & y
   *         and x & !(...) contradictions stay out of scope.
   */
  aig_lit and_absorb( aig_lit a, aig_lit b )
  {
    auto absorbs = [&]( aig_lit x, aig_lit other ) -> std::optional<aig_lit> {
      if ( !lit_comp( other ) && is_and( lit_node( other ) ) )
      {
        auto const& nn = nodes_[lit_node( other )];
        if ( nn.fan0 == x || nn.fan1 == x )
          return other; // x & (x & y) = x & y
      }
      return std::nullopt;
    };
    if ( auto r = absorbs( a, b ) )
      return *r;
    if ( auto r = absorbs( b, a ) )
      return *r;
    return and_( a, b );
  }

  aig_lit or_( aig_lit a, aig_lit b ) { return lit_not( and_( lit_not( a ), lit_not( b ) ) ); }
  aig_lit xor_( aig_lit a, aig_lit b )
  {
    return lit_not( and_( lit_not( and_( a, lit_not( b ) ) ), lit_not( and_( lit_not( a ), b ) ) ) );
  }
  aig_lit mux( aig_lit a, aig_lit b, aig_lit s )
  {
    return lit_not( and_( lit_not( and_( s, b ) ), lit_not( and_( lit_not( s ), a ) ) ) );
  }

  /*! \brief AND levels per node; PIs and the constant are level 0. */
  std::vector<uint32_t> levels() const
  {
    std::vector<uint32_t> lvl( nodes_.size(), 0 );
    for ( uint32_t n = num_pis_ + 1; n < nodes_.size(); ++n )
      lvl[n] = 1 + std::max( lvl[lit_node( nodes_[n].fan0 )], lvl[lit_node( nodes_[n].fan1 )] );
    return lvl;
  }

  uint32_t depth() const
  {
    auto lvl = levels();
    uint32_t d = 0;
    for ( auto o : outputs_ )
      d = std::max( d, lvl[lit_node( o )] );
    return d;
  }

  /*! \brief Fanout counts including output references. */
  std::vector<uint32_t> fanout_counts() const
  {
    std::vector<uint32_t> fc( nodes_.size(), 0 );
    for ( uint32_t n = num_pis_ + 1; n < nodes_.size(); ++n )
    {
      ++fc[lit_node( nodes_[n].fan0 )];
      ++fc[lit_node( nodes_[n].fan1 )];
    }
    for ( auto o : outputs_ )
      ++fc[lit_node( o )];
    return fc;
  }

  /*! \brief 64-lane simulation; `pi_values[i]` is the word of PI i+1. */
  std::vector<uint64_t> simulate64( std::vector<uint64_t> const& pi_values ) const
  {
    std::vector<uint64_t> val( nodes_.size(), 0 );
    for ( uint32_t i = 0; i < num_pis_; ++i )
      val[i + 1] = i < pi_values.size() ? pi_values[i] : 0;
    for ( uint32_t n = num_pis_ + 1; n < nodes_.size(); ++n )
    {
      uint64_t a = val[lit_node( nodes_[n].fan0 )] ^ ( lit_comp( nodes_[n].fan0 ) ? ~uint64_t( 0 ) : 0 );
      uint64_t b = val[lit_node( nodes_[n].fan1 )] ^ ( lit_comp( nodes_[n].fan1 ) ? ~uint64_t( 0 ) : 0 );
      val[n] = a & b;
    }
    return val;
  }

  bool operator==( aig const& other ) const
  {
    if ( num_pis_ != other.num_pis_ || nodes_.size() != other.nodes_.size() || outputs_ != other.outputs_ )
      return false;
    for ( size_t i = 0; i < nodes_.size(); ++i )
    {
      if ( nodes_[i].fan0 != other.nodes_[i].fan0 || nodes_[i].fan1 != other.nodes_[i].fan1 )
        return false;
    }
    return true;
  }

private:
  std::vector<node> nodes_;
  std::vector<aig_lit> outputs_;
  uint32_t num_pis_{ 0 };
  std::unordered_map<uint64_t, uint32_t> strash_;
};

/*! \brief Port and register bookkeeping for netlist <-> AIG round trips.
 *
 * PIs: input port bits in port order, then one per DFF (its Q). POs:
 * output port bits, then one per DFF (its D cone).
 */
struct aig_ports
{
  std::string module_name;
  std::vector<std::pair<std::string, uint32_t>> inputs;  //!< (name, width)
  std::vector<std::pair<std::string, uint32_t>> outputs; //!< (name, width)

  struct dff_rec
  {
    std::string inst;
    std::string clk_port; //!< empty when the clock is a constant
    uint32_t clk_index{ 0 };
    bool clk_const_value{ false };
  };
  std::vector<dff_rec> dffs;

  uint32_t num_input_bits() const
  {
    uint32_t n = 0;
    for ( auto const& [name, w] : inputs )
      n += w;
    return n;
  }
  uint32_t num_output_bits() const
  {
    uint32_t n = 0;
    for ( auto const& [name, w] : outputs )
      n += w;
    return n;
  }
};

struct strash_result
{
  aig g;
  aig_ports ports;
};

/*! \brief Builds the hashed AIG of a generic-gate netlist. Word-level and
 *         LIB cells must be lowered first.
 */
inline strash_result strash( netlist const& nl )
{
  for ( auto const& [cid, c] : nl.cells )
  {
    if ( is_word_level( c.kind ) || c.kind == cell_kind::LIB )
      throw unmapped_cell( "strash requires generic gates, found " + to_string( c.kind ) + " '" + c.name + "'" );
  }

  strash_result r;
  r.ports.module_name = nl.name;
  std::map<std::pair<net_id, uint32_t>, aig_lit> lit_of;

  for ( auto const& p : nl.ports )
  {
    if ( p.dir != port_dir::in )
      continue;
    r.ports.inputs.push_back( { p.name, p.width } );
    for ( uint32_t i = 0; i < p.width; ++i )
      lit_of[{ p.net, i }] = make_lit( r.g.add_pi(), false );
  }

  /* DFF Q bits are extra PIs; collect clock bookkeeping */
  driver_map dm( nl );
  std::vector<std::pair<cell_id, cell const*>> dffs;
  for ( auto const& [cid, c] : nl.cells )
  {
    if ( c.kind == cell_kind::DFF )
      dffs.push_back( { cid, &c } );
  }
  for ( auto const& [cid, c] : dffs )
  {
    auto qb = c->pins.at( "Q" ).bit( 0 );
    lit_of[{ qb.net, qb.index }] = make_lit( r.g.add_pi(), false );
    aig_ports::dff_rec rec;
    rec.inst = c->name;
    auto clk = c->pins.at( "CLK" ).bit( 0 );
    if ( clk.is_const )
    {
      rec.clk_const_value = clk.value;
    }
    else
    {
      auto const& d = dm.at( clk.net, clk.index );
      if ( d.kind != bit_driver::kind_t::input_port )
        throw unmapped_cell( "DFF '" + c->name + "' clock must come from an input port" );
      rec.clk_port = nl.nets.at( clk.net ).name;
      rec.clk_index = clk.index;
    }
    r.ports.dffs.push_back( std::move( rec ) );
  }

  auto bit_lit = [&]( bit_ref b ) -> aig_lit {
    if ( b.is_const )
      return b.value ? aig_true : aig_false;
    auto it = lit_of.find( { b.net, b.index } );
    if ( it == lit_of.end() )
      return aig_false; // undriven and unread
    return it->second;
  };

  for ( auto cid : topo_order( nl ) )
  {
    auto const& c = nl.cells.at( cid );
    if ( c.kind == cell_kind::DFF )
      continue;
    auto in = [&]( char const* p ) { return bit_lit( c.pins.at( p ).bit( 0 ) ); };
    aig_lit y = aig_false;
    switch ( c.kind )
    {
    case cell_kind::BUF: y = in( "A" ); break;
    case cell_kind::NOT_: y = lit_not( in( "A" ) ); break;
    case cell_kind::AND_: y = r.g.and_( in( "A" ), in( "B" ) ); break;
    case cell_kind::NAND: y = lit_not( r.g.and_( in( "A" ), in( "B" ) ) ); break;
    case cell_kind::OR_: y = r.g.or_( in( "A" ), in( "B" ) ); break;
    case cell_kind::NOR_: y = lit_not( r.g.or_( in( "A" ), in( "B" ) ) ); break;
    case cell_kind::XOR_: y = r.g.xor_( in( "A" ), in( "B" ) ); break;
    case cell_kind::XNOR: y = lit_not( r.g.xor_( in( "A" ), in( "B" ) ) ); break;
    case cell_kind::MUX: y = r.g.mux( in( "A" ), in( "B" ), in( "S" ) ); break;
    default: break;
    }
    auto out = c.pins.at( "Y" ).bit( 0 );
    if ( !out.is_const )
      lit_of[{ out.net, out.index }] = y;
  }

  for ( auto const& p : nl.ports )
  {
    if ( p.dir != port_dir::out )
      continue;
    r.ports.outputs.push_back( { p.name, p.width } );
    for ( uint32_t i = 0; i < p.width; ++i )
      r.g.add_output( bit_lit( bit_ref::of_net( p.net, i ) ) );
  }
  for ( auto const& [cid, c] : dffs )
    r.g.add_output( bit_lit( c->pins.at( "D" ).bit( 0 ) ) );

  return r;
}

/*! \brief Emits the AIG as a netlist of AND/NOT cells (buffers only where a
 *         port bit would otherwise be undriven), reinstating DFFs.
 */
inline netlist aig_to_netlist( aig const& g, aig_ports const& ports )
{
  netlist n;
  n.name = ports.module_name;
  std::map<std::string, net_id> port_net;
  for ( auto const& [name, w] : ports.inputs )
    port_net[name] = n.add_port( name, port_dir::in, w );
  for ( auto const& [name, w] : ports.outputs )
    port_net[name] = n.add_port( name, port_dir::out, w );

  /* PI literals */
  std::map<uint32_t, bit_ref> node_bit; // non-complemented node -> net bit
  std::vector<net_id> dff_q_nets;
  {
    uint32_t pi = 1;
    for ( auto const& [name, w] : ports.inputs )
    {
      for ( uint32_t i = 0; i < w; ++i )
        node_bit[pi++] = bit_ref::of_net( port_net.at( name ), i );
    }
    for ( auto const& d : ports.dffs )
    {
      net_id q = n.add_net( n.fresh_net_name( "q__" + d.inst ), 1 );
      dff_q_nets.push_back( q );
      node_bit[pi++] = bit_ref::of_net( q, 0 );
    }
  }

  /* only nodes reachable from an output are emitted */
  std::vector<bool> need( g.num_nodes(), false );
  {
    std::vector<uint32_t> work;
    for ( auto o : g.outputs() )
    {
      if ( !need[lit_node( o )] )
      {
        need[lit_node( o )] = true;
        work.push_back( lit_node( o ) );
      }
    }
    while ( !work.empty() )
    {
      uint32_t v = work.back();
      work.pop_back();
      if ( !g.is_and( v ) )
        continue;
      for ( auto f : { g.at( v ).fan0, g.at( v ).fan1 } )
      {
        if ( !need[lit_node( f )] )
        {
          need[lit_node( f )] = true;
          work.push_back( lit_node( f ) );
        }
      }
    }
  }

  std::map<uint32_t, bit_ref> inv_bit; // complemented literal cache
  uint32_t k = 0;
  auto lit_bit = [&]( aig_lit l ) -> bit_ref {
    uint32_t v = lit_node( l );
    if ( v == 0 )
      return bit_ref::constant( lit_comp( l ) );
    if ( !lit_comp( l ) )
      return node_bit.at( v );
    auto it = inv_bit.find( v );
    if ( it != inv_bit.end() )
      return it->second;
    net_id o = n.add_net( n.fresh_net_name( "i" + std::to_string( v ) ), 1 );
    cell c;
    c.kind = cell_kind::NOT_;
    c.name = "inv" + std::to_string( k++ );
    c.pins["A"] = signal_ref::of_bit( node_bit.at( v ) );
    c.pins["Y"] = signal_ref::whole( o, 1 );
    n.add_cell( std::move( c ) );
    bit_ref b = bit_ref::of_net( o, 0 );
    inv_bit[v] = b;
    return b;
  };

  for ( uint32_t v = g.num_pis() + 1; v < g.num_nodes(); ++v )
  {
    if ( !need[v] )
      continue;
    net_id o = n.add_net( n.fresh_net_name( "n" + std::to_string( v ) ), 1 );
    cell c;
    c.kind = cell_kind::AND_;
    c.name = "and" + std::to_string( v );
    c.pins["A"] = signal_ref::of_bit( lit_bit( g.at( v ).fan0 ) );
    c.pins["B"] = signal_ref::of_bit( lit_bit( g.at( v ).fan1 ) );
    c.pins["Y"] = signal_ref::whole( o, 1 );
    n.add_cell( std::move( c ) );
    node_bit[v] = bit_ref::of_net( o, 0 );
  }

  /* outputs: buffer or invert into the port bits */
  uint32_t po = 0;
  auto drive = [&]( bit_ref target, aig_lit l ) {
    cell c;
    c.kind = lit_comp( l ) && lit_node( l ) != 0 ? cell_kind::NOT_ : cell_kind::BUF;
    c.name = "po" + std::to_string( po );
    bit_ref src = lit_node( l ) == 0 ? bit_ref::constant( lit_comp( l ) ) : node_bit.at( lit_node( l ) );
    c.pins["A"] = signal_ref::of_bit( src );
    c.pins["Y"] = signal_ref::of_bit( target );
    n.add_cell( std::move( c ) );
  };
  for ( auto const& [name, w] : ports.outputs )
  {
    for ( uint32_t i = 0; i < w; ++i )
    {
      drive( bit_ref::of_net( port_net.at( name ), i ), g.outputs()[po] );
      ++po;
    }
  }
  for ( size_t d = 0; d < ports.dffs.size(); ++d )
  {
    auto const& rec = ports.dffs[d];
    net_id dnet = n.add_net( n.fresh_net_name( "d__" + rec.inst ), 1 );
    drive( bit_ref::of_net( dnet, 0 ), g.outputs()[po] );
    ++po;
    cell ff;
    ff.kind = cell_kind::DFF;
    ff.name = rec.inst;
    ff.pins["D"] = signal_ref::whole( dnet, 1 );
    if ( rec.clk_port.empty() )
      ff.pins["CLK"] = signal_ref::constant( { rec.clk_const_value } );
    else
      ff.pins["CLK"] = signal_ref{ slice{ port_net.at( rec.clk_port ), rec.clk_index, rec.clk_index } };
    ff.pins["Q"] = signal_ref::whole( dff_q_nets[d], 1 );
    n.add_cell( std::move( ff ) );
  }
  remove_unused_nets( n );
  return n;
}

} // namespace synkit
