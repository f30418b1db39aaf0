/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file opt.hpp
  \brief Word-level netlist rewrites: part-select shift lowering to block
         multiplexers, constant propagation, dead-cell elimination, and
         multiply-accumulate inference

  The shift lowering detects constant strides in the select logic of a
  SHIFTX, raises non-power-of-two strides to the next power of two with
  zero padding, and replaces the shifter by a balanced block-multiplexer
  tree. Shifts without a stride pattern fall back to a full barrel shifter
  so no SHIFTX survives the pass.
*/

#pragma once

#include <optional>

#include "netlist.hpp"

namespace synkit
{

struct stride_match
{
  cell_id cell{ 0 };
  uint64_t stride{ 1 };   //!< bits per selectable block, > 0
  signal_ref index;       //!< block selector; shift amount = index * stride
  uint32_t blocks{ 1 };   //!< ceil(WA / stride)
};

namespace opt_detail
{

/* substitution of driven net bits by other bits; output-port bits keep
   their net and receive a BUF from the replacement instead */
class bit_subst
{
public:
  explicit bit_subst( netlist& n ) : n_( n )
  {
    for ( auto const& p : n.ports )
      if ( p.dir == port_dir::out )
        port_nets_.insert( p.net );
  }

  void map( bit_ref from, bit_ref to )
  {
    repl_[{ from.net, from.index }] = to;
  }

  bool empty() const { return repl_.empty(); }

  bit_ref resolve( bit_ref b ) const
  {
    while ( !b.is_const )
    {
      auto it = repl_.find( { b.net, b.index } );
      if ( it == repl_.end() )
        break;
      b = it->second;
    }
    return b;
  }

  /* rewrites all cell input pins; emits BUFs for substituted output-port bits */
  void apply()
  {
    for ( auto& [cid, c] : n_.cells )
    {
      for ( auto& [pin, sr] : c.pins )
      {
        bool is_out = false;
        for ( auto const& out : driver_map::output_pins( n_, c ) )
          is_out |= out == pin;
        if ( is_out )
          continue;
        signal_ref fixed;
        for ( uint32_t i = 0; i < sr.width(); ++i )
          fixed.append_bit( resolve( sr.bit( i ) ) );
        sr = std::move( fixed );
      }
    }
    uint32_t k = 0;
    for ( auto const& [from, to_unused] : repl_ )
    {
      if ( !port_nets_.count( from.first ) )
        continue;
      bit_ref to = resolve( bit_ref::of_net( from.first, from.second ) );
      cell buf;
      buf.kind = cell_kind::BUF;
      buf.name = n_.nets.at( from.first ).name + "__keep" + std::to_string( k++ ) + "_" + std::to_string( from.second );
      buf.pins["A"] = signal_ref::of_bit( to );
      buf.pins["Y"] = signal_ref{ slice{ from.first, from.second, from.second } };
      n_.add_cell( std::move( buf ) );
    }
  }

private:
  netlist& n_;
  std::map<std::pair<net_id, uint32_t>, bit_ref> repl_;
  std::set<net_id> port_nets_;
};

} // namespace opt_detail

/*! \brief Detects a constant stride in the select logic of a SHIFTX.
 *
 * Returns a match iff the S pin is structurally (a) a constant, (b) a
 * concatenation {index, k >= 1 zero bits} giving stride 2^k, or (c) the
 * output of MUL(index, constant) giving that constant stride.
 */
inline std::optional<stride_match> detect_stride( netlist const& n, cell_id shiftx )
{
  auto const& c = n.cells.at( shiftx );
  if ( c.kind != cell_kind::SHIFTX )
    return std::nullopt;
  uint32_t wa = static_cast<uint32_t>( c.param( "WA" ) );
  auto const& s = c.pins.at( "S" );

  auto blocks_for = [&]( uint64_t stride ) {
    return static_cast<uint32_t>( ( wa + stride - 1 ) / stride );
  };

  /* (a) constant select */
  if ( s.is_constant() )
  {
    uint64_t v = 0;
    bool huge = false;
    for ( uint32_t i = 0; i < s.width(); ++i )
    {
      if ( s.bit( i ).value )
      {
        if ( i >= 63 )
          huge = true;
        else
          v |= uint64_t( 1 ) << i;
      }
    }
    stride_match m;
    m.cell = shiftx;
    m.stride = huge || v > 0 ? std::max<uint64_t>( v, 1 ) : 1;
    if ( huge )
      m.stride = wa; // shifts everything out; any stride >= WA works
    m.index = signal_ref::constant( { huge || v > 0 } );
    m.blocks = blocks_for( m.stride );
    return m;
  }

  /* (b) {index, k zero bits}: maximal run of constant-0 low bits */
  uint32_t k = 0;
  while ( k < s.width() )
  {
    auto b = s.bit( k );
    if ( b.is_const && !b.value )
      ++k;
    else
      break;
  }
  if ( k >= 1 && k < s.width() )
  {
    signal_ref index;
    for ( uint32_t i = k; i < s.width(); ++i )
      index.append_bit( s.bit( i ) );
    stride_match m;
    m.cell = shiftx;
    m.stride = uint64_t( 1 ) << k;
    m.index = std::move( index );
    m.blocks = blocks_for( m.stride );
    return m;
  }

  /* (c) S = MUL(index, constant) covering exactly the MUL output */
  if ( s.segments.size() == 1 )
  {
    if ( auto* sl = std::get_if<slice>( &s.segments[0] ) )
    {
      driver_map dm( n );
      auto const& drv = dm.at( sl->net, sl->lsb );
      if ( drv.kind == bit_driver::kind_t::cell_output )
      {
        auto const& mc = n.cells.at( drv.cell );
        if ( mc.kind == cell_kind::MUL )
        {
          auto ybits = mc.pins.at( "Y" ).bits();
          auto sbits = s.bits();
          if ( ybits == sbits )
          {
            auto const& a = mc.pins.at( "A" );
            auto const& b = mc.pins.at( "B" );
            signal_ref const* idx = nullptr;
            signal_ref const* cst = nullptr;
            if ( a.is_constant() && !b.is_constant() )
              cst = &a, idx = &b;
            else if ( b.is_constant() && !a.is_constant() )
              cst = &b, idx = &a;
            if ( idx )
            {
              uint64_t v = 0;
              bool huge = false;
              for ( uint32_t i = 0; i < cst->width(); ++i )
              {
                if ( cst->bit( i ).value )
                {
                  if ( i >= 63 )
                    huge = true;
                  else
                    v |= uint64_t( 1 ) << i;
                }
              }
              if ( !huge && v > 0 )
              {
                stride_match m;
                m.cell = shiftx;
                m.stride = v;
                m.index = *idx;
                m.blocks = blocks_for( v );
                /* in-range shifts must fit the MUL output width unscathed */
                uint64_t max_shift = uint64_t( m.blocks - 1 ) * v;
                uint32_t wy_mul = static_cast<uint32_t>( mc.param( "WY" ) );
                if ( wy_mul >= 64 || max_shift < ( uint64_t( 1 ) << wy_mul ) )
                  return m;
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

/*! \brief Raises a non-power-of-two stride to the next power of two.
 *
 * The A input is repacked block-wise with zero padding from stride to
 * stride' bits, S becomes {index, log2(stride') zeros}, widths updated.
 * Applies only when WY <= stride (a pure field extract); power-of-two
 * strides pass through unchanged.
 */
inline netlist pad_stride_pow2( stride_match const& m, netlist const& n_in )
{
  netlist n = n_in;
  auto& c = n.cells.at( m.cell );
  uint32_t wa = static_cast<uint32_t>( c.param( "WA" ) );
  uint32_t wy = static_cast<uint32_t>( c.param( "WY" ) );
  uint64_t s = m.stride;
  if ( ( s & ( s - 1 ) ) == 0 )
    return n; // already a power of two
  if ( wy > s )
    return n; // windows span blocks; padding would change the function
  uint64_t s2 = uint64_t( 1 ) << clog2( s );

  auto const& a = c.pins.at( "A" );
  signal_ref a2;
  for ( uint32_t j = 0; j < m.blocks; ++j )
  {
    for ( uint64_t t = 0; t < s2; ++t )
    {
      uint64_t src = j * s + t;
      if ( t < s && src < wa )
        a2.append_bit( a.bit( static_cast<uint32_t>( src ) ) );
      else
        a2.append_bit( bit_ref::constant( false ) );
    }
  }
  signal_ref s2ref;
  for ( uint32_t i = 0; i < clog2( s2 ); ++i )
    s2ref.append_bit( bit_ref::constant( false ) );
  s2ref.append( m.index );

  c.pins["A"] = std::move( a2 );
  c.pins["S"] = std::move( s2ref );
  c.params["WA"] = static_cast<int64_t>( m.blocks * s2 );
  c.params["WS"] = static_cast<int64_t>( clog2( s2 ) + m.index.width() );
  return n;
}

namespace opt_detail
{

/* window j, bit t of a matched shift: A bit j*stride+t, 0 beyond WA */
inline bit_ref window_bit( signal_ref const& a, uint32_t wa, uint64_t stride, uint32_t j, uint32_t t )
{
  uint64_t src = uint64_t( j ) * stride + t;
  if ( src >= wa )
    return bit_ref::constant( false );
  return a.bit( static_cast<uint32_t>( src ) );
}

/* balanced pruned mux tree over the windows, written into `targets`;
   out-of-range selectors resolve to the last window */
inline void build_blockmux( netlist& n, cell const& sx, stride_match const& m,
                            std::vector<bit_ref> const& targets )
{
  uint32_t wa = static_cast<uint32_t>( sx.param( "WA" ) );
  uint32_t wy = static_cast<uint32_t>( sx.param( "WY" ) );
  auto const& a = sx.pins.at( "A" );

  std::vector<std::vector<bit_ref>> slots( m.blocks );
  for ( uint32_t j = 0; j < m.blocks; ++j )
  {
    slots[j].resize( wy );
    for ( uint32_t t = 0; t < wy; ++t )
      slots[j][t] = window_bit( a, wa, m.stride, j, t );
  }

  uint32_t levels = clog2( m.blocks );
  for ( uint32_t lvl = 0; lvl < levels; ++lvl )
  {
    bool final_level = slots.size() == 2;
    bit_ref sel = lvl < m.index.width() ? m.index.bit( lvl ) : bit_ref::constant( false );
    std::vector<std::vector<bit_ref>> next;
    for ( uint32_t i = 0; 2 * i < slots.size(); ++i )
    {
      if ( 2 * i + 1 >= slots.size() )
      {
        next.push_back( slots[2 * i] ); // odd leftover: pass through
        continue;
      }
      net_id o = 0;
      if ( !final_level )
        o = n.add_net( n.fresh_net_name( sx.name + "__l" + std::to_string( lvl ) + "s" + std::to_string( i ) ), wy );
      for ( uint32_t t = 0; t < wy; ++t )
      {
        cell mx;
        mx.kind = cell_kind::MUX;
        mx.name = sx.name + "__l" + std::to_string( lvl ) + "s" + std::to_string( i ) + "b" + std::to_string( t );
        mx.pins["A"] = signal_ref::of_bit( slots[2 * i][t] );
        mx.pins["B"] = signal_ref::of_bit( slots[2 * i + 1][t] );
        mx.pins["S"] = signal_ref::of_bit( sel );
        mx.pins["Y"] = final_level ? signal_ref::of_bit( targets[t] ) : signal_ref{ slice{ o, t, t } };
        n.add_cell( std::move( mx ) );
      }
      if ( !final_level )
      {
        std::vector<bit_ref> bits( wy );
        for ( uint32_t t = 0; t < wy; ++t )
          bits[t] = bit_ref::of_net( o, t );
        next.push_back( std::move( bits ) );
      }
    }
    if ( final_level )
      return;
    slots = std::move( next );
  }
  /* blocks == 1: pure rewiring through a substitution */
  bit_subst subst( n );
  for ( uint32_t t = 0; t < wy; ++t )
  {
    if ( !targets[t].is_const )
      subst.map( targets[t], slots[0][t] );
  }
  subst.apply();
}

/* full barrel shifter: WS levels of WA muxes; the last level's low WY bits
   drive `targets` directly */
inline void build_barrel( netlist& n, cell const& sx, std::vector<bit_ref> const& targets )
{
  uint32_t wa = static_cast<uint32_t>( sx.param( "WA" ) );
  uint32_t ws = static_cast<uint32_t>( sx.param( "WS" ) );
  uint32_t wy = static_cast<uint32_t>( sx.param( "WY" ) );
  auto const& a = sx.pins.at( "A" );
  auto const& s = sx.pins.at( "S" );

  std::vector<bit_ref> v = a.bits();
  for ( uint32_t lvl = 0; lvl < ws; ++lvl )
  {
    bool final_level = lvl + 1 == ws;
    net_id o = 0;
    bool need_net = !final_level || wa > wy;
    if ( need_net )
      o = n.add_net( n.fresh_net_name( sx.name + "__b" + std::to_string( lvl ) ), wa );
    for ( uint32_t t = 0; t < wa; ++t )
    {
      uint64_t shifted = uint64_t( t ) + ( uint64_t( 1 ) << std::min<uint32_t>( lvl, 63 ) );
      bit_ref hi = ( lvl <= 63 && shifted < wa ) ? v[static_cast<uint32_t>( shifted )] : bit_ref::constant( false );
      cell mx;
      mx.kind = cell_kind::MUX;
      mx.name = sx.name + "__b" + std::to_string( lvl ) + "_" + std::to_string( t );
      mx.pins["A"] = signal_ref::of_bit( v[t] );
      mx.pins["B"] = signal_ref::of_bit( hi );
      mx.pins["S"] = signal_ref::of_bit( s.bit( lvl ) );
      if ( final_level && t < wy )
        mx.pins["Y"] = signal_ref::of_bit( targets[t] );
      else
        mx.pins["Y"] = signal_ref{ slice{ o, t, t } };
      n.add_cell( std::move( mx ) );
    }
    if ( !final_level )
    {
      for ( uint32_t t = 0; t < wa; ++t )
        v[t] = bit_ref::of_net( o, t );
    }
  }
}

inline void rewire_outputs( netlist& n, std::vector<bit_ref> const& targets, std::vector<bit_ref> const& result )
{
  bit_subst subst( n );
  for ( uint32_t t = 0; t < targets.size(); ++t )
  {
    if ( !targets[t].is_const )
      subst.map( targets[t], t < result.size() ? result[t] : bit_ref::constant( false ) );
  }
  subst.apply();
}

} // namespace opt_detail

/*! \brief Lowers every SHIFTX: matched strides become balanced block-mux
 *         trees, everything else a barrel shifter. The output contains no
 *         SHIFTX cells.
 */
inline netlist shift_to_blockmux( netlist const& n_in )
{
  netlist n = n_in;
  std::vector<cell_id> shifts;
  for ( auto const& [cid, c] : n.cells )
    if ( c.kind == cell_kind::SHIFTX )
      shifts.push_back( cid );

  for ( auto cid : shifts )
  {
    auto m = detect_stride( n, cid );
    auto const sx = n.cells.at( cid ); // copy; the cell is removed below
    uint32_t wy = static_cast<uint32_t>( sx.param( "WY" ) );
    uint32_t wa = static_cast<uint32_t>( sx.param( "WA" ) );
    auto targets = sx.pins.at( "Y" ).bits();
    n.remove_cell( cid );
    if ( m && ( m->index.is_constant() || m->blocks == 1 ) )
    {
      /* constant shift amount or single block: pure rewiring */
      uint64_t shift = m->index.is_constant() && m->index.bit( 0 ).value ? m->stride : 0;
      std::vector<bit_ref> result( wy );
      for ( uint32_t t = 0; t < wy; ++t )
        result[t] = shift + t < wa ? sx.pins.at( "A" ).bit( static_cast<uint32_t>( shift + t ) ) : bit_ref::constant( false );
      opt_detail::rewire_outputs( n, targets, result );
    }
    else if ( m )
    {
      opt_detail::build_blockmux( n, sx, *m, targets );
    }
    else
    {
      opt_detail::build_barrel( n, sx, targets );
    }
  }
  remove_unused_nets( n );
  return n;
}

/*! \brief Lowers every SHIFTX through the barrel fallback regardless of
 *         stride structure (the comparison baseline).
 */
inline netlist lower_shiftx_barrel( netlist const& n_in )
{
  netlist n = n_in;
  std::vector<cell_id> shifts;
  for ( auto const& [cid, c] : n.cells )
    if ( c.kind == cell_kind::SHIFTX )
      shifts.push_back( cid );
  for ( auto cid : shifts )
  {
    auto const sx = n.cells.at( cid );
    auto targets = sx.pins.at( "Y" ).bits();
    n.remove_cell( cid );
    opt_detail::build_barrel( n, sx, targets );
  }
  remove_unused_nets( n );
  return n;
}

/*! \brief Folds and simplifies generic gates with constant inputs to a
 *         fixed point. Cell count is monotonically non-increasing and the
 *         function is preserved exactly.
 */
inline netlist const_propagate( netlist const& n_in )
{
  netlist n = n_in;
  bool changed = true;
  while ( changed )
  {
    changed = false;
    opt_detail::bit_subst subst( n );
    std::vector<cell_id> drop;

    for ( auto& [cid, c] : n.cells )
    {
      if ( !is_generic_gate( c.kind ) )
        continue;
      auto in = [&]( char const* p ) { return c.pins.at( p ).bit( 0 ); };
      auto out = [&]() { return c.pins.at( "Y" ).bit( 0 ); };
      auto fold_const = [&]( bool v ) {
        subst.map( out(), bit_ref::constant( v ) );
        drop.push_back( cid );
        changed = true;
      };
      auto alias = [&]( bit_ref b ) {
        subst.map( out(), b );
        drop.push_back( cid );
        changed = true;
      };
      auto to_not = [&]( bit_ref b ) {
        c.kind = cell_kind::NOT_;
        signal_ref y = c.pins.at( "Y" );
        c.pins.clear();
        c.pins["A"] = signal_ref::of_bit( b );
        c.pins["Y"] = y;
        changed = true;
      };

      switch ( c.kind )
      {
      case cell_kind::BUF:
        if ( in( "A" ).is_const )
          fold_const( in( "A" ).value );
        break;
      case cell_kind::NOT_:
        if ( in( "A" ).is_const )
          fold_const( !in( "A" ).value );
        break;
      case cell_kind::AND_:
      case cell_kind::NAND:
      case cell_kind::OR_:
      case cell_kind::NOR_:
      {
        bool is_and = c.kind == cell_kind::AND_ || c.kind == cell_kind::NAND;
        bool neg = c.kind == cell_kind::NAND || c.kind == cell_kind::NOR_;
        bit_ref a = in( "A" ), b = in( "B" );
        if ( a.is_const && b.is_const )
        {
          bool v = is_and ? ( a.value && b.value ) : ( a.value || b.value );
          fold_const( v != neg ? true : false );
        }
        else if ( a.is_const || b.is_const )
        {
          bit_ref k = a.is_const ? a : b;
          bit_ref x = a.is_const ? b : a;
          bool absorbing = is_and ? !k.value : k.value; // AND&0, OR|1
          if ( absorbing )
            fold_const( is_and ? neg : !neg ? true : false );
          else if ( !neg )
            alias( x );
          else
            to_not( x );
        }
        break;
      }
      case cell_kind::XOR_:
      case cell_kind::XNOR:
      {
        bool neg = c.kind == cell_kind::XNOR;
        bit_ref a = in( "A" ), b = in( "B" );
        if ( a.is_const && b.is_const )
        {
          fold_const( ( a.value != b.value ) != neg );
        }
        else if ( a.is_const || b.is_const )
        {
          bit_ref k = a.is_const ? a : b;
          bit_ref x = a.is_const ? b : a;
          if ( k.value != neg )
            to_not( x );
          else
            alias( x );
        }
        break;
      }
      case cell_kind::MUX:
      {
        bit_ref a = in( "A" ), b = in( "B" ), s = in( "S" );
        if ( s.is_const )
        {
          bit_ref sel = s.value ? b : a;
          if ( sel.is_const )
            fold_const( sel.value );
          else
            alias( sel );
        }
        else if ( a.is_const && b.is_const )
        {
          if ( a.value == b.value )
            fold_const( a.value );
          else if ( !a.value ) // Y = S
            alias( s );
          else // Y = !S
            to_not( s );
        }
        break;
      }
      default:
        break;
      }
    }

    for ( auto cid : drop )
      n.remove_cell( cid );
    if ( !subst.empty() )
      subst.apply();
  }
  remove_unused_nets( n );
  return n;
}

/*! \brief Removes cells with no transitive fanout to an output port or a
 *         DFF input. DFFs themselves are never removed. Idempotent.
 */
inline netlist dead_cell_elim( netlist const& n_in )
{
  netlist n = n_in;
  driver_map dm( n );

  std::set<cell_id> keep;
  std::vector<cell_id> work;
  auto mark_drivers_of = [&]( signal_ref const& sr ) {
    for ( auto b : sr.bits() )
    {
      if ( b.is_const )
        continue;
      auto const& d = dm.at( b.net, b.index );
      if ( d.kind == bit_driver::kind_t::cell_output && !keep.count( d.cell ) )
      {
        keep.insert( d.cell );
        work.push_back( d.cell );
      }
    }
  };

  for ( auto const& p : n.ports )
  {
    if ( p.dir == port_dir::out )
      mark_drivers_of( signal_ref::whole( p.net, p.width ) );
  }
  for ( auto const& [cid, c] : n.cells )
  {
    if ( c.kind == cell_kind::DFF )
    {
      if ( !keep.count( cid ) )
        keep.insert( cid ), work.push_back( cid );
    }
  }
  while ( !work.empty() )
  {
    cell_id cid = work.back();
    work.pop_back();
    auto const& c = n.cells.at( cid );
    for ( auto const& [pin, sr] : c.pins )
    {
      bool is_out = false;
      for ( auto const& out : driver_map::output_pins( n, c ) )
        is_out |= out == pin;
      if ( !is_out )
        mark_drivers_of( sr );
    }
  }

  std::vector<cell_id> drop;
  for ( auto const& [cid, c] : n.cells )
    if ( !keep.count( cid ) )
      drop.push_back( cid );
  for ( auto cid : drop )
    n.remove_cell( cid );
  remove_unused_nets( n );
  return n;
}

namespace opt_detail
{

/* the cell (if any) whose output pin drives exactly this whole signal,
   with no other reader of any of its bits */
inline std::optional<cell_id> exclusive_driver( netlist const& n, driver_map const& dm, signal_ref const& sr, cell_id reader )
{
  auto bits = sr.bits();
  if ( bits.empty() || bits[0].is_const )
    return std::nullopt;
  auto const& d0 = dm.at( bits[0].net, bits[0].index );
  if ( d0.kind != bit_driver::kind_t::cell_output )
    return std::nullopt;
  cell_id drv = d0.cell;
  auto const& dc = n.cells.at( drv );
  auto ybits = dc.pins.at( "Y" ).bits();
  if ( ybits != bits )
    return std::nullopt;

  /* single fanout: no other cell pin or output port reads these bits */
  std::set<std::pair<net_id, uint32_t>> owned;
  for ( auto const& b : bits )
    owned.insert( { b.net, b.index } );
  for ( auto const& p : n.ports )
  {
    if ( p.dir != port_dir::out )
      continue;
    for ( uint32_t i = 0; i < p.width; ++i )
      if ( owned.count( { p.net, i } ) )
        return std::nullopt;
  }
  for ( auto const& [cid, c] : n.cells )
  {
    if ( cid == reader || cid == drv )
      continue;
    for ( auto const& [pin, sr2] : c.pins )
    {
      bool is_out = false;
      for ( auto const& out : driver_map::output_pins( n, c ) )
        is_out |= out == pin;
      if ( is_out )
        continue;
      for ( auto b : sr2.bits() )
        if ( !b.is_const && owned.count( { b.net, b.index } ) )
          return std::nullopt;
    }
  }
  /* the reader itself must read them exactly once (in sr) */
  return drv;
}

} // namespace opt_detail

/*! \brief Fuses ADD(ADD(MUL(a,b), c), d) and ADD(MUL(a,b), c) chains with
 *         single-fanout intermediates into MACC cells (D tied to 0 for the
 *         three-term form). Intermediate widths must be lossless.
 */
inline netlist infer_macc( netlist const& n_in )
{
  netlist n = n_in;

  struct match_t
  {
    cell_id outer, add1, mul;
    bool four_term;
    signal_ref c_sig, d_sig;
  };

  /* the addend signals must not read the fused intermediates */
  auto overlaps = [&]( signal_ref const& sr, cell_id producer ) {
    std::set<std::pair<net_id, uint32_t>> owned;
    for ( auto b : n.cells.at( producer ).pins.at( "Y" ).bits() )
      if ( !b.is_const )
        owned.insert( { b.net, b.index } );
    for ( auto b : sr.bits() )
      if ( !b.is_const && owned.count( { b.net, b.index } ) )
        return true;
    return false;
  };

  auto exact_mul = [&]( cell_id cid ) {
    auto const& mc = n.cells.at( cid );
    return mc.kind == cell_kind::MUL && mc.param( "WY" ) >= mc.param( "WA" ) + mc.param( "WB" );
  };

  /* 4-term patterns first so an inner ADD(MUL, c) is not consumed early */
  auto find_match = [&]( driver_map const& dm, bool want_four ) -> std::optional<match_t> {
    for ( auto const& [cid, c] : n.cells )
    {
      if ( c.kind != cell_kind::ADD )
        continue;
      for ( auto const& [lhs, rhs] : { std::pair<char const*, char const*>{ "A", "B" }, { "B", "A" } } )
      {
        auto drv = opt_detail::exclusive_driver( n, dm, c.pins.at( lhs ), cid );
        if ( !drv )
          continue;
        auto const& inner = n.cells.at( *drv );
        if ( want_four )
        {
          if ( inner.kind != cell_kind::ADD )
            continue;
          if ( inner.param( "WY" ) < std::max( inner.param( "WA" ), inner.param( "WB" ) ) + 1 )
            continue;
          for ( auto const& [mp, op] : { std::pair<char const*, char const*>{ "A", "B" }, { "B", "A" } } )
          {
            auto mdrv = opt_detail::exclusive_driver( n, dm, inner.pins.at( mp ), *drv );
            if ( !mdrv || !exact_mul( *mdrv ) )
              continue;
            match_t m{ cid, *drv, *mdrv, true, inner.pins.at( op ), c.pins.at( rhs ) };
            if ( overlaps( m.c_sig, m.mul ) || overlaps( m.d_sig, m.mul ) || overlaps( m.d_sig, m.add1 ) )
              continue;
            auto const& mcell = n.cells.at( *mdrv );
            int64_t full = std::max( { mcell.param( "WA" ) + mcell.param( "WB" ),
                                       static_cast<int64_t>( m.c_sig.width() ),
                                       static_cast<int64_t>( m.d_sig.width() ) } ) +
                           2;
            if ( c.param( "WY" ) > full )
              continue;
            return m;
          }
        }
        else
        {
          if ( !exact_mul( *drv ) )
            continue;
          match_t m{ cid, 0, *drv, false, c.pins.at( rhs ), {} };
          if ( overlaps( m.c_sig, m.mul ) )
            continue;
          int64_t full = std::max( { inner.param( "WA" ) + inner.param( "WB" ),
                                     static_cast<int64_t>( m.c_sig.width() ), int64_t( 1 ) } ) +
                         2;
          if ( c.param( "WY" ) > full )
            continue;
          return m;
        }
      }
    }
    return std::nullopt;
  };

  while ( true )
  {
    driver_map dm( n );
    auto m = find_match( dm, true );
    if ( !m )
      m = find_match( dm, false );
    if ( !m )
      break;

    auto const& mc = n.cells.at( m->mul );
    auto const& outer = n.cells.at( m->outer );
    int64_t wa = mc.param( "WA" ), wb = mc.param( "WB" );
    int64_t wc = m->c_sig.width();
    int64_t wd = m->four_term ? m->d_sig.width() : 1;
    int64_t wy = std::max( { wa + wb, wc, wd } ) + 2;
    int64_t wo = outer.param( "WY" ); // <= wy, checked during matching

    cell macc;
    macc.kind = cell_kind::MACC;
    macc.name = outer.name;
    macc.params = { { "WA", wa }, { "WB", wb }, { "WC", wc }, { "WD", wd }, { "WY", wy } };
    macc.pins["A"] = mc.pins.at( "A" );
    macc.pins["B"] = mc.pins.at( "B" );
    macc.pins["C"] = m->c_sig;
    macc.pins["D"] = m->four_term ? m->d_sig : signal_ref::constant_zero( 1 );
    signal_ref y = outer.pins.at( "Y" );
    if ( wo < wy )
    {
      net_id hi = n.add_net( n.fresh_net_name( outer.name + "__hi" ), static_cast<uint32_t>( wy - wo ) );
      y.append( signal_ref::whole( hi, static_cast<uint32_t>( wy - wo ) ) );
    }
    macc.pins["Y"] = std::move( y );

    n.remove_cell( m->mul );
    if ( m->four_term )
      n.remove_cell( m->add1 );
    n.remove_cell( m->outer );
    n.add_cell( std::move( macc ) );
  }
  remove_unused_nets( n );
  return n;
}

} // namespace synkit
