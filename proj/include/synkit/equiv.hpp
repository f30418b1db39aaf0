/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file equiv.hpp
  \brief Combinational equivalence checking: miter construction, exhaustive
         and seeded-random vector checking, input-legality constraints, and
         a DIMACS miter exporter
*/

#pragma once

#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "sim.hpp"

namespace synkit
{

/*! \brief Input-legality predicate: a netlist with one 1-bit output that
 *         reads 1 on legal vectors. Its inputs must be a subset of the
 *         checked designs' inputs (matched by name).
 */
struct constraint
{
  netlist predicate;
  std::string output; //!< name of the 1-bit legality output port
};

struct equiv_verdict
{
  enum class kind_t
  {
    equivalent,
    counterexample,
    inconclusive
  } kind{ kind_t::inconclusive };

  std::string mode;
  uint64_t vectors_tried{ 0 };
  std::optional<sim_vector> cex;
  std::string differing_output; //!< e.g. "y[3]"
  std::string note;

  bool equivalent() const { return kind == kind_t::equivalent; }
};

struct equiv_mode
{
  enum class kind_t
  {
    exhaustive,
    random
  } kind{ kind_t::exhaustive };
  uint32_t max_bits{ 16 };
  uint64_t vectors{ 100000 };
  uint64_t seed{ 42 };

  static equiv_mode exhaustive( uint32_t max_bits = 16 )
  {
    equiv_mode m;
    m.kind = kind_t::exhaustive;
    m.max_bits = max_bits;
    return m;
  }
  static equiv_mode random( uint64_t n, uint64_t seed )
  {
    equiv_mode m;
    m.kind = kind_t::random;
    m.vectors = n;
    m.seed = seed;
    return m;
  }
};

namespace equiv_detail
{

inline void check_signatures( netlist const& a, netlist const& b )
{
  auto sig = []( netlist const& n ) {
    std::map<std::string, std::pair<port_dir, uint32_t>> s;
    for ( auto const& p : n.ports )
      s[p.name] = { p.dir, p.width };
    return s;
  };
  if ( sig( a ) != sig( b ) )
    throw signature_mismatch( "designs '" + a.name + "' and '" + b.name + "' have different port signatures" );
}

/* instantiates `src` into `dst`, prefixing non-shared nets and all cell
   names; shared nets are the input ports mapped in `net_map` */
inline void inline_design( netlist& dst, netlist const& src, std::string const& prefix,
                           std::map<net_id, net_id>& net_map )
{
  for ( auto const& [id, nn] : src.nets )
  {
    if ( !net_map.count( id ) )
      net_map[id] = dst.add_net( prefix + nn.name, nn.width );
  }
  for ( auto const& [cid, c] : src.cells )
  {
    cell cc = c;
    cc.name = prefix + c.name;
    for ( auto& [pin, sr] : cc.pins )
    {
      for ( auto& seg : sr.segments )
      {
        if ( auto* sl = std::get_if<slice>( &seg ) )
          sl->net = net_map.at( sl->net );
      }
    }
    dst.add_cell( std::move( cc ) );
  }
}

} // namespace equiv_detail

/*! \brief Builds the XOR/OR-reduce miter of two designs with identical
 *         signatures; DIFF reads 1 on any output mismatch. With a
 *         constraint, DIFF is gated so illegal vectors never flag.
 */
inline netlist build_miter( netlist const& a_in, netlist const& b_in, constraint const* cons = nullptr )
{
  netlist a = comb_view( a_in );
  netlist b = comb_view( b_in );
  equiv_detail::check_signatures( a, b );

  netlist m;
  m.name = "miter";
  std::map<net_id, net_id> amap, bmap, cmap;
  for ( auto const& p : a.ports )
  {
    if ( p.dir == port_dir::in )
    {
      net_id shared = m.add_port( p.name, port_dir::in, p.width );
      amap[p.net] = shared;
      auto* bp = b.find_port( p.name );
      bmap[bp->net] = shared;
      if ( cons )
      {
        if ( auto* cp = cons->predicate.find_port( p.name ); cp && cp->dir == port_dir::in )
          cmap[cp->net] = shared;
      }
    }
  }
  /* output ports become internal nets */
  for ( auto const& p : a.ports )
  {
    if ( p.dir == port_dir::out )
      amap[p.net] = m.add_net( "a__" + p.name, p.width );
  }
  for ( auto const& p : b.ports )
  {
    if ( p.dir == port_dir::out )
      bmap[p.net] = m.add_net( "b__" + p.name, p.width );
  }

  equiv_detail::inline_design( m, a, "a__", amap );
  equiv_detail::inline_design( m, b, "b__", bmap );

  /* XOR each output bit, OR-reduce */
  std::vector<bit_ref> diffs;
  uint32_t k = 0;
  for ( auto const& p : a.ports )
  {
    if ( p.dir != port_dir::out )
      continue;
    auto* bp = b.find_port( p.name );
    for ( uint32_t i = 0; i < p.width; ++i )
    {
      net_id d = m.add_net( "diff_" + std::to_string( k ), 1 );
      cell x;
      x.kind = cell_kind::XOR_;
      x.name = "xor_" + std::to_string( k );
      x.pins["A"] = signal_ref{ slice{ amap.at( p.net ), i, i } };
      x.pins["B"] = signal_ref{ slice{ bmap.at( bp->net ), i, i } };
      x.pins["Y"] = signal_ref::whole( d, 1 );
      m.add_cell( std::move( x ) );
      diffs.push_back( bit_ref::of_net( d, 0 ) );
      ++k;
    }
  }

  /* OR-reduce tree */
  uint32_t t = 0;
  while ( diffs.size() > 1 )
  {
    std::vector<bit_ref> next;
    for ( size_t i = 0; i + 1 < diffs.size(); i += 2 )
    {
      net_id o = m.add_net( "ord_" + std::to_string( t ), 1 );
      cell orc;
      orc.kind = cell_kind::OR_;
      orc.name = "or_" + std::to_string( t++ );
      orc.pins["A"] = signal_ref::of_bit( diffs[i] );
      orc.pins["B"] = signal_ref::of_bit( diffs[i + 1] );
      orc.pins["Y"] = signal_ref::whole( o, 1 );
      m.add_cell( std::move( orc ) );
      next.push_back( bit_ref::of_net( o, 0 ) );
    }
    if ( diffs.size() % 2 )
      next.push_back( diffs.back() );
    diffs = std::move( next );
  }
  bit_ref raw_diff = diffs.empty() ? bit_ref::constant( false ) : diffs[0];

  net_id diff_port = m.add_port( "DIFF", port_dir::out, 1 );
  if ( cons )
  {
    netlist cv = comb_view( cons->predicate );
    for ( auto const& p : cv.ports )
    {
      if ( p.dir == port_dir::in && !cmap.count( p.net ) )
        throw signature_mismatch( "constraint input '" + p.name + "' is not an input of the designs" );
      if ( p.dir == port_dir::out )
        cmap[p.net] = m.add_net( "c__" + p.name, p.width );
    }
    equiv_detail::inline_design( m, cv, "c__", cmap );
    auto* lp = cv.find_port( cons->output );
    if ( !lp || lp->dir != port_dir::out || lp->width != 1 )
      throw signature_mismatch( "constraint output '" + cons->output + "' must be a 1-bit output" );
    cell g;
    g.kind = cell_kind::AND_;
    g.name = "diff_gate";
    g.pins["A"] = signal_ref::of_bit( raw_diff );
    g.pins["B"] = signal_ref{ slice{ cmap.at( lp->net ), 0, 0 } };
    g.pins["Y"] = signal_ref::whole( diff_port, 1 );
    m.add_cell( std::move( g ) );
  }
  else
  {
    cell buf;
    buf.kind = cell_kind::BUF;
    buf.name = "diff_buf";
    buf.pins["A"] = signal_ref::of_bit( raw_diff );
    buf.pins["Y"] = signal_ref::whole( diff_port, 1 );
    m.add_cell( std::move( buf ) );
  }
  return m;
}

namespace equiv_detail
{

/* lane words for exhaustive batch t: global input bit j over lanes 0..63 */
inline uint64_t exhaustive_word( uint64_t batch, uint32_t j )
{
  static constexpr uint64_t proj[6] = {
      0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
      0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
  if ( j < 6 )
    return proj[j];
  return ( ( batch >> ( j - 6 ) ) & 1 ) ? ~uint64_t( 0 ) : 0;
}

} // namespace equiv_detail

/*! \brief Checks functional equivalence of two designs.
 *
 * Exhaustive mode enumerates all input vectors when the total input width
 * fits the bit budget, otherwise returns Inconclusive. Random mode draws
 * seeded vectors; with a constraint, illegal vectors are resampled up to
 * 10x the requested count before giving up. The first counterexample in
 * vector order wins and is re-simulated as a self-check.
 */
inline equiv_verdict check_equiv( netlist const& a, netlist const& b, equiv_mode mode,
                                  constraint const* cons = nullptr, cell_library const* lib = nullptr )
{
  netlist m = build_miter( a, b, cons );
  simulator sim( m, lib );

  auto inputs = sim.input_ports();
  std::vector<std::pair<std::string, uint32_t>> bit_index; // (port, bit)
  for ( auto const* p : inputs )
  {
    for ( uint32_t i = 0; i < p->width; ++i )
      bit_index.push_back( { p->name, i } );
  }
  uint32_t nbits = static_cast<uint32_t>( bit_index.size() );

  auto make_vector = [&]( std::function<bool( uint32_t )> const& bit ) {
    sim_vector v;
    for ( auto const* p : inputs )
      v.values[p->name].assign( p->width, false );
    for ( uint32_t j = 0; j < nbits; ++j )
      v.values[bit_index[j].first][bit_index[j].second] = bit( j );
    return v;
  };

  auto finish_cex = [&]( sim_vector const& v, equiv_verdict& verdict ) {
    /* self-check: the counterexample must re-simulate to a real mismatch */
    auto oa = simulate( a, v, lib );
    auto ob = simulate( b, v, lib );
    for ( auto const& [name, bits] : oa )
    {
      auto const& other = ob.at( name );
      for ( size_t i = 0; i < bits.size(); ++i )
      {
        if ( bits[i] != other[i] )
        {
          verdict.kind = equiv_verdict::kind_t::counterexample;
          verdict.cex = v;
          verdict.differing_output = name + "[" + std::to_string( i ) + "]";
          return;
        }
      }
    }
    /* DIFF=1 but outputs agree: internal inconsistency */
    throw std::logic_error( "miter flagged a vector that re-simulates equal" );
  };

  equiv_verdict verdict;
  if ( mode.kind == equiv_mode::kind_t::exhaustive )
  {
    verdict.mode = "exhaustive";
    if ( nbits > mode.max_bits )
    {
      verdict.kind = equiv_verdict::kind_t::inconclusive;
      verdict.note = std::to_string( nbits ) + " input bits exceed exhaustive budget of " + std::to_string( mode.max_bits );
      return verdict;
    }
    uint64_t total = uint64_t( 1 ) << nbits;
    uint64_t batches = ( total + 63 ) / 64;
    uint64_t lanes_last = total - ( batches - 1 ) * 64;
    for ( uint64_t t = 0; t < batches; ++t )
    {
      std::map<std::string, std::vector<uint64_t>> in;
      for ( auto const* p : inputs )
        in[p->name].assign( p->width, 0 );
      for ( uint32_t j = 0; j < nbits; ++j )
        in[bit_index[j].first][bit_index[j].second] = equiv_detail::exhaustive_word( t, j );
      auto out = sim.run( in );
      uint64_t diff = out.at( "DIFF" )[0];
      uint64_t nlanes = ( t + 1 == batches ) ? lanes_last : 64;
      if ( nlanes < 64 )
        diff &= ( nlanes == 64 ) ? ~uint64_t( 0 ) : ( ( uint64_t( 1 ) << nlanes ) - 1 );
      verdict.vectors_tried += nlanes;
      if ( diff )
      {
        uint32_t lane = static_cast<uint32_t>( __builtin_ctzll( diff ) );
        uint64_t v = t * 64 + lane;
        auto vec = make_vector( [&]( uint32_t j ) { return ( v >> j ) & 1; } );
        finish_cex( vec, verdict );
        verdict.vectors_tried = v + 1;
        return verdict;
      }
    }
    verdict.kind = equiv_verdict::kind_t::equivalent;
    return verdict;
  }

  /* random mode */
  verdict.mode = "random";
  std::mt19937_64 rng( mode.seed );
  std::optional<simulator> cons_sim;
  if ( cons )
    cons_sim.emplace( cons->predicate, lib );

  uint64_t draws = 0, cap = 10 * mode.vectors;
  std::vector<sim_vector> batch;
  batch.reserve( 64 );
  uint64_t accepted = 0;
  bool exhausted = false;

  auto run_batch = [&]() -> bool {
    if ( batch.empty() )
      return false;
    std::map<std::string, std::vector<uint64_t>> in;
    for ( auto const* p : inputs )
      in[p->name].assign( p->width, 0 );
    for ( size_t l = 0; l < batch.size(); ++l )
    {
      for ( uint32_t j = 0; j < nbits; ++j )
      {
        if ( batch[l].values[bit_index[j].first][bit_index[j].second] )
          in[bit_index[j].first][bit_index[j].second] |= uint64_t( 1 ) << l;
      }
    }
    auto out = sim.run( in );
    uint64_t diff = out.at( "DIFF" )[0];
    if ( batch.size() < 64 )
      diff &= ( uint64_t( 1 ) << batch.size() ) - 1;
    verdict.vectors_tried += batch.size();
    if ( diff )
    {
      uint32_t lane = static_cast<uint32_t>( __builtin_ctzll( diff ) );
      finish_cex( batch[lane], verdict );
      return true;
    }
    batch.clear();
    return false;
  };

  while ( accepted < mode.vectors && !exhausted )
  {
    /* draw one vector, resampling until it satisfies the constraint */
    sim_vector v;
    while ( true )
    {
      if ( draws >= cap )
      {
        exhausted = true;
        break;
      }
      ++draws;
      v = make_vector( [&]( uint32_t ) { return ( rng() & 1 ) != 0; } );
      if ( !cons )
        break;
      auto lo = cons_sim->run_scalar( v );
      if ( lo.at( cons->output )[0] )
        break;
    }
    if ( exhausted )
      break;
    ++accepted;
    batch.push_back( std::move( v ) );
    if ( batch.size() == 64 )
    {
      if ( run_batch() )
        return verdict;
    }
  }
  if ( run_batch() )
    return verdict;

  if ( accepted < mode.vectors )
  {
    verdict.kind = equiv_verdict::kind_t::inconclusive;
    verdict.note = "constraint resampling cap reached after " + std::to_string( draws ) + " draws";
    return verdict;
  }
  verdict.kind = equiv_verdict::kind_t::equivalent;
  return verdict;
}

/*! \brief Exhaustive when the input fits 16 bits, else Random(1e5, seed). */
inline equiv_verdict check_equiv_auto( netlist const& a, netlist const& b, constraint const* cons = nullptr,
                                       cell_library const* lib = nullptr, uint64_t seed = 42 )
{
  simulator probe( a, lib );
  if ( probe.total_input_bits() <= 16 )
    return check_equiv( a, b, equiv_mode::exhaustive( 16 ), cons, lib );
  return check_equiv( a, b, equiv_mode::random( 100000, seed ), cons, lib );
}

/*! \brief Tseitin-encodes a generic-gate netlist into DIMACS CNF; satisfying
 *         assignments set the given output bit to 1.
 */
inline std::string export_cnf( netlist const& n_in, std::string const& output = "DIFF" )
{
  netlist n = comb_view( n_in );
  for ( auto const& [id, c] : n.cells )
  {
    if ( is_word_level( c.kind ) || c.kind == cell_kind::LIB )
      throw unmapped_cell( "CNF export requires generic gates only (cell '" + c.name + "')" );
  }

  /* variable per net bit; var 1 is constant true */
  std::map<std::pair<net_id, uint32_t>, int> var;
  int next = 2;
  for ( auto const& [id, nn] : n.nets )
  {
    for ( uint32_t i = 0; i < nn.width; ++i )
      var[{ id, i }] = next++;
  }
  std::vector<std::vector<int>> clauses;
  clauses.push_back( { 1 } ); // constant-true anchor

  auto lit = [&]( bit_ref b ) { return b.is_const ? ( b.value ? 1 : -1 ) : var.at( { b.net, b.index } ); };

  for ( auto const& [cid, c] : n.cells )
  {
    auto out = lit( c.pins.at( c.kind == cell_kind::DFF ? "Q" : "Y" ).bit( 0 ) );
    auto in = [&]( char const* p, uint32_t i = 0 ) { return lit( c.pins.at( p ).bit( i ) ); };
    switch ( c.kind )
    {
    case cell_kind::BUF:
      clauses.push_back( { -in( "A" ), out } );
      clauses.push_back( { in( "A" ), -out } );
      break;
    case cell_kind::NOT_:
      clauses.push_back( { in( "A" ), out } );
      clauses.push_back( { -in( "A" ), -out } );
      break;
    case cell_kind::AND_:
    case cell_kind::NAND:
    {
      int y = c.kind == cell_kind::AND_ ? out : -out;
      clauses.push_back( { -in( "A" ), -in( "B" ), y } );
      clauses.push_back( { in( "A" ), -y } );
      clauses.push_back( { in( "B" ), -y } );
      break;
    }
    case cell_kind::OR_:
    case cell_kind::NOR_:
    {
      int y = c.kind == cell_kind::OR_ ? out : -out;
      clauses.push_back( { in( "A" ), in( "B" ), -y } );
      clauses.push_back( { -in( "A" ), y } );
      clauses.push_back( { -in( "B" ), y } );
      break;
    }
    case cell_kind::XOR_:
    case cell_kind::XNOR:
    {
      int y = c.kind == cell_kind::XOR_ ? out : -out;
      clauses.push_back( { -in( "A" ), -in( "B" ), -y } );
      clauses.push_back( { in( "A" ), in( "B" ), -y } );
      clauses.push_back( { -in( "A" ), in( "B" ), y } );
      clauses.push_back( { in( "A" ), -in( "B" ), y } );
      break;
    }
    case cell_kind::MUX:
    {
      clauses.push_back( { in( "S" ), -in( "A" ), out } );
      clauses.push_back( { in( "S" ), in( "A" ), -out } );
      clauses.push_back( { -in( "S" ), -in( "B" ), out } );
      clauses.push_back( { -in( "S" ), in( "B" ), -out } );
      break;
    }
    default:
      break;
    }
  }

  auto* op = n.find_port( output );
  if ( !op )
    throw signature_mismatch( "netlist has no output '" + output + "'" );
  clauses.push_back( { var.at( { op->net, 0 } ) } );

  std::ostringstream os;
  os << "c synkit miter, goal: " << output << " = 1\n";
  for ( auto const& p : n.ports )
  {
    if ( p.dir == port_dir::in )
    {
      for ( uint32_t i = 0; i < p.width; ++i )
        os << "c var " << var.at( { p.net, i } ) << " = " << p.name << "[" << i << "]\n";
    }
  }
  os << "p cnf " << next - 1 << " " << clauses.size() << "\n";
  for ( auto const& cl : clauses )
  {
    for ( int l : cl )
      os << l << " ";
    os << "0\n";
  }
  return os.str();
}

/*! \brief Comparator predicate `port < bound` as a constraint netlist. */
inline constraint less_than_constraint( std::string const& port_name, uint32_t width, uint64_t bound )
{
  netlist n;
  n.name = "assume_lt";
  net_id in = n.add_port( port_name, port_dir::in, width );
  net_id ok = n.add_port( "LEGAL", port_dir::out, 1 );

  if ( width < 64 && bound >= ( uint64_t( 1 ) << width ) )
  {
    /* every representable value is legal */
    cell buf;
    buf.kind = cell_kind::BUF;
    buf.name = "legal_buf";
    buf.pins["A"] = signal_ref::constant( { true } );
    buf.pins["Y"] = signal_ref::whole( ok, 1 );
    n.add_cell( std::move( buf ) );
    (void)in;
    return constraint{ std::move( n ), "LEGAL" };
  }

  /* lt(i): strict comparison from MSB down, unrolled */
  bit_ref lt = bit_ref::constant( false );
  bit_ref eq = bit_ref::constant( true );
  uint32_t k = 0;
  auto mk = [&]( cell_kind kind, bit_ref a, bit_ref b ) {
    net_id o = n.add_net( "t" + std::to_string( k ), 1 );
    cell c;
    c.kind = kind;
    c.name = "c" + std::to_string( k++ );
    c.pins["A"] = signal_ref::of_bit( a );
    c.pins["B"] = signal_ref::of_bit( b );
    c.pins["Y"] = signal_ref::whole( o, 1 );
    n.add_cell( std::move( c ) );
    return bit_ref::of_net( o, 0 );
  };
  for ( int i = static_cast<int>( width ) - 1; i >= 0; --i )
  {
    bool kb = ( bound >> i ) & 1;
    bit_ref xi = bit_ref::of_net( in, static_cast<uint32_t>( i ) );
    // lt' = lt | (eq & !xi & kb); eq' = eq & (xi == kb)
    if ( kb )
    {
      net_id o = n.add_net( "t" + std::to_string( k ), 1 );
      cell inv;
      inv.kind = cell_kind::NOT_;
      inv.name = "c" + std::to_string( k++ );
      inv.pins["A"] = signal_ref::of_bit( xi );
      inv.pins["Y"] = signal_ref::whole( o, 1 );
      n.add_cell( std::move( inv ) );
      bit_ref nxi = bit_ref::of_net( o, 0 );
      bit_ref step = mk( cell_kind::AND_, eq, nxi );
      lt = mk( cell_kind::OR_, lt, step );
      eq = mk( cell_kind::AND_, eq, xi );
    }
    else
    {
      net_id o = n.add_net( "t" + std::to_string( k ), 1 );
      cell inv;
      inv.kind = cell_kind::NOT_;
      inv.name = "c" + std::to_string( k++ );
      inv.pins["A"] = signal_ref::of_bit( xi );
      inv.pins["Y"] = signal_ref::whole( o, 1 );
      n.add_cell( std::move( inv ) );
      eq = mk( cell_kind::AND_, eq, bit_ref::of_net( o, 0 ) );
    }
  }
  cell buf;
  buf.kind = cell_kind::BUF;
  buf.name = "legal_buf";
  buf.pins["A"] = signal_ref::of_bit( lt );
  buf.pins["Y"] = signal_ref::whole( ok, 1 );
  n.add_cell( std::move( buf ) );
  return constraint{ std::move( n ), "LEGAL" };
}

} // namespace synkit
