/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file lms.hpp
  \brief Lazy man's synthesis: record harvesting, probing, cut rewriting
         against the record library, depth balancing, and the iterative
         script

  Cut rewriting selects a depth-then-area cover; a covered cone is replaced
  by its record only when that strictly improves (arrival, then AND count),
  so graph depth never increases. Balancing rebuilds maximal single-fanout
  AND trees to minimal depth over leaf arrivals.
*/

#pragma once

#include <functional>

#include "cuts.hpp"
#include "record_library.hpp"

namespace synkit
{

namespace lms_detail
{

/* drops vacuous variables; returns (tt', support positions) */
inline std::pair<uint64_t, std::vector<uint32_t>> minimize_support( uint64_t tt, uint32_t k )
{
  std::vector<uint32_t> sup;
  for ( uint32_t i = 0; i < k; ++i )
  {
    bool dep = false;
    for ( uint32_t m = 0; m < ( 1u << k ); ++m )
    {
      if ( !( ( m >> i ) & 1 ) )
      {
        if ( ( ( tt >> m ) & 1 ) != ( ( tt >> ( m | ( 1u << i ) ) ) & 1 ) )
        {
          dep = true;
          break;
        }
      }
    }
    if ( dep )
      sup.push_back( i );
  }
  if ( sup.size() == k )
    return { tt, sup };
  uint64_t out = 0;
  for ( uint32_t m = 0; m < ( 1u << sup.size() ); ++m )
  {
    uint32_t full = 0;
    for ( size_t i = 0; i < sup.size(); ++i )
      full |= ( ( m >> i ) & 1 ) << sup[i];
    out |= ( ( tt >> full ) & 1ull ) << m;
  }
  return { out, sup };
}

/* cone of `root` over `leaves` as a record structure; nullopt when the
   cone structurally references a non-support leaf */
inline std::optional<record_structure> cone_structure( aig const& g, uint32_t root,
                                                       std::vector<uint32_t> const& leaves )
{
  record_structure s;
  s.k = static_cast<uint32_t>( leaves.size() );
  std::map<uint32_t, uint32_t> lit_of; // node -> structure literal (positive)
  for ( uint32_t i = 0; i < leaves.size(); ++i )
    lit_of[leaves[i]] = i << 1;

  auto nodes = cone_nodes( g, root, leaves );
  for ( auto v : nodes )
  {
    auto const& nd = g.at( v );
    auto f = [&]( aig_lit l ) -> std::optional<uint32_t> {
      if ( lit_node( l ) == 0 )
        return std::nullopt; // constants in cones come from degenerate cuts
      auto it = lit_of.find( lit_node( l ) );
      if ( it == lit_of.end() )
        return std::nullopt;
      return it->second ^ ( lit_comp( l ) ? 1u : 0u );
    };
    auto a = f( nd.fan0 ), b = f( nd.fan1 );
    if ( !a || !b )
      return std::nullopt;
    s.nodes.push_back( { *a, *b } );
    lit_of[v] = ( s.k + static_cast<uint32_t>( s.nodes.size() ) - 1 ) << 1;
  }
  auto it = lit_of.find( root );
  if ( it == lit_of.end() )
    return std::nullopt;
  s.out = it->second;
  return s;
}

/* rewires a structure's inputs/output so it implements the transform's
   preimage: input j of the result reads original variable perm[j],
   complemented per the transform */
inline record_structure apply_transform_to_structure( record_structure const& s, npn_transform const& t )
{
  record_structure r = s;
  auto fix = [&]( uint32_t l ) -> uint32_t {
    uint32_t idx = l >> 1;
    if ( idx >= s.k )
      return l;
    uint32_t j = idx;
    uint32_t var = t.perm[j];
    bool comp = ( ( t.input_comp >> j ) & 1 ) != 0;
    return ( var << 1 ) | ( ( l & 1 ) ^ ( comp ? 1u : 0u ) );
  };
  for ( auto& nd : r.nodes )
  {
    nd.f0 = fix( nd.f0 );
    nd.f1 = fix( nd.f1 );
  }
  r.out = fix( r.out );
  if ( t.output_comp )
    r.out ^= 1;
  return r;
}

} // namespace lms_detail

/*! \brief Harvests every enumerated cut of the design into the library,
 *         keeping the better structure under (depth, ands). Cuts whose
 *         structural support exceeds their functional support are skipped.
 */
inline record_library record_add( record_library lib, aig const& g, uint32_t k )
{
  if ( k != lib.k_max() )
    throw std::invalid_argument( "record_add requires K = lib.K" );
  auto sets = enumerate_cuts( g, k, 8 );
  for ( uint32_t n = g.num_pis() + 1; n < g.num_nodes(); ++n )
  {
    for ( auto const& c : sets[n].cuts )
    {
      if ( c.leaves.size() == 1 && c.leaves[0] == n )
        continue; // trivial cut
      auto [mtt, sup] = lms_detail::minimize_support( c.tt, c.size() );
      if ( sup.size() != c.leaves.size() || sup.empty() )
        continue; // degenerate or support-deficient cut
      auto s = lms_detail::cone_structure( g, n, c.leaves );
      if ( !s )
        continue;
      auto canon = npn_canon( c.tt, c.size() );
      /* C(x) = oc ^ f(y) with y[perm[j]] = x_j ^ c_j: the canonical
         structure reads f's input i from x[perm^-1(i)] with that
         position's complement, output flipped by oc */
      npn_transform inv;
      inv.k = canon.transform.k;
      for ( uint32_t j = 0; j < c.size(); ++j )
      {
        inv.perm[canon.transform.perm[j]] = static_cast<uint8_t>( j );
        if ( ( canon.transform.input_comp >> j ) & 1 )
          inv.input_comp |= uint8_t( 1 ) << canon.transform.perm[j];
      }
      inv.output_comp = canon.transform.output_comp;
      auto cs = lms_detail::apply_transform_to_structure( *s, inv );
      lib.offer( canon.canonical, std::move( cs ) );
    }
  }
  return lib;
}

/*! \brief A probe hit: structure over the canonical inputs plus the wiring
 *         back to the query's variable order and polarities.
 */
struct probe_hit
{
  record_structure instantiated; //!< rewired to the query: input i = query variable i
  uint32_t depth{ 0 };
  uint32_t ands{ 0 };
  std::vector<uint32_t> query_vars; //!< structure input i reads query var query_vars[i]
};

/*! \brief Looks up the canonical class of `tt`; on a hit returns the stored
 *         structure rewired to the query's polarity and variable order.
 */
inline std::optional<probe_hit> record_probe( record_library const& lib, uint64_t tt, uint32_t k )
{
  if ( k > lib.k_max() )
    throw std::invalid_argument( "probe arity exceeds lib.K" );
  auto [mtt, sup] = lms_detail::minimize_support( tt, k );
  if ( sup.empty() )
    return std::nullopt; // constants have no records
  auto canon = npn_canon( mtt, static_cast<uint32_t>( sup.size() ) );
  auto const* s = lib.lookup( static_cast<uint32_t>( sup.size() ), canon.canonical );
  if ( !s )
    return std::nullopt;

  /* stored S computes canonical C over x; the query satisfies
     mtt = inverse(T)(C), i.e. mtt(y) = oc ^ C(x), x_j = y[perm[j]] ^ c_j */
  record_structure inst = *s;
  auto fix = [&]( uint32_t l ) -> uint32_t {
    uint32_t idx = l >> 1;
    if ( idx >= s->k )
      return l;
    uint32_t var = canon.transform.perm[idx];
    bool comp = ( ( canon.transform.input_comp >> idx ) & 1 ) != 0;
    return ( var << 1 ) | ( ( l & 1 ) ^ ( comp ? 1u : 0u ) );
  };
  for ( auto& nd : inst.nodes )
  {
    nd.f0 = fix( nd.f0 );
    nd.f1 = fix( nd.f1 );
  }
  inst.out = fix( inst.out );
  if ( canon.transform.output_comp )
    inst.out ^= 1;

  if ( inst.simulate() != mtt )
    throw std::logic_error( "record probe produced a structure not matching the query" );

  probe_hit hit;
  hit.depth = inst.depth();
  hit.ands = inst.ands();
  hit.instantiated = std::move( inst );
  hit.query_vars.assign( sup.begin(), sup.end() );
  return hit;
}

namespace lms_detail
{

/* longest root-to-leaf distance inside the cone, per leaf (0 = unused) */
inline std::vector<uint32_t> cone_leaf_depths( aig const& g, uint32_t root, std::vector<uint32_t> const& leaves )
{
  std::map<uint32_t, std::vector<uint32_t>> d;
  std::vector<uint32_t> zero( leaves.size(), 0 );
  auto leaf_pos = [&]( uint32_t v ) -> int {
    auto it = std::lower_bound( leaves.begin(), leaves.end(), v );
    if ( it != leaves.end() && *it == v )
      return static_cast<int>( it - leaves.begin() );
    return -1;
  };
  auto nodes = cone_nodes( g, root, leaves );
  for ( auto v : nodes )
  {
    std::vector<uint32_t> cur( leaves.size(), 0 );
    for ( auto f : { g.at( v ).fan0, g.at( v ).fan1 } )
    {
      uint32_t fv = lit_node( f );
      int lp = leaf_pos( fv );
      if ( lp >= 0 )
      {
        cur[lp] = std::max( cur[lp], 1u );
      }
      else if ( d.count( fv ) )
      {
        auto const& fd = d[fv];
        for ( size_t i = 0; i < leaves.size(); ++i )
        {
          if ( fd[i] )
            cur[i] = std::max( cur[i], fd[i] + 1 );
        }
      }
    }
    d[v] = std::move( cur );
  }
  auto it = d.find( root );
  return it == d.end() ? zero : it->second;
}

/* per-input depth of a probe hit in the query's variable space */
inline std::vector<uint32_t> hit_leaf_depths( probe_hit const& hit, uint32_t k )
{
  std::vector<uint32_t> out( k, 0 );
  auto d = hit.instantiated.input_depths(); // over minimized vars
  for ( size_t i = 0; i < hit.query_vars.size(); ++i )
  {
    if ( i < d.size() && d[i] != UINT32_MAX )
      out[hit.query_vars[i]] = std::max( out[hit.query_vars[i]], d[i] );
  }
  return out;
}

} // namespace lms_detail

/*! \brief Replaces covered cones by strictly better record structures.
 *
 * A depth-then-area cover is selected with exact per-leaf arrival
 * estimates; each covered cone takes its record only when that improves
 * (arrival, then AND count), so depth never increases.
 */
inline aig lms_rewrite( aig const& g, record_library const& lib, uint32_t k )
{
  if ( lib.k_max() < k )
    throw std::invalid_argument( "lms_rewrite requires lib.K >= K" );
  auto sets = enumerate_cuts( g, k, 8 );

  struct choice_t
  {
    cut const* c{ nullptr };
    bool use_record{ false };
    std::optional<probe_hit> hit;
    uint64_t arrival{ 0 };
    double area_flow{ 0.0 };
  };
  std::vector<choice_t> choice( g.num_nodes() );
  std::vector<uint64_t> arrival( g.num_nodes(), 0 );
  std::vector<double> flow( g.num_nodes(), 0.0 );
  auto fanout = g.fanout_counts();

  for ( uint32_t n = g.num_pis() + 1; n < g.num_nodes(); ++n )
  {
    choice_t best;
    best.arrival = UINT64_MAX;
    best.area_flow = 1e300;
    for ( auto const& c : sets[n].cuts )
    {
      if ( c.leaves.size() == 1 && c.leaves[0] == n )
        continue; // trivial cut cannot implement the node
      auto cone_d = lms_detail::cone_leaf_depths( g, n, c.leaves );
      auto cone = lms_detail::cone_structure( g, n, c.leaves );
      if ( !cone )
        continue;
      uint64_t cone_arr = 0;
      for ( size_t i = 0; i < c.leaves.size(); ++i )
        cone_arr = std::max( cone_arr, arrival[c.leaves[i]] + cone_d[i] );
      uint32_t cone_ands = cone->ands();

      choice_t cand;
      cand.c = &c;
      cand.use_record = false;
      cand.arrival = cone_arr;
      uint32_t impl_ands = cone_ands;

      auto hit = record_probe( lib, c.tt, c.size() );
      if ( hit )
      {
        auto hd = lms_detail::hit_leaf_depths( *hit, c.size() );
        uint64_t rec_arr = 0;
        for ( size_t i = 0; i < c.leaves.size(); ++i )
          rec_arr = std::max( rec_arr, arrival[c.leaves[i]] + hd[i] );
        /* records replace a cone only on strict (depth, ands) improvement */
        if ( std::make_pair( rec_arr, hit->ands ) < std::make_pair( cone_arr, cone_ands ) )
        {
          cand.use_record = true;
          cand.arrival = rec_arr;
          impl_ands = hit->ands;
          cand.hit = std::move( hit );
        }
      }
      /* shared leaves amortize their flow over fanout */
      cand.area_flow = impl_ands;
      for ( auto l : c.leaves )
        cand.area_flow += flow[l] / std::max( 1u, fanout[l] );

      if ( std::make_pair( cand.arrival, cand.area_flow ) < std::make_pair( best.arrival, best.area_flow ) )
        best = std::move( cand );
    }
    choice[n] = std::move( best );
    arrival[n] = choice[n].arrival;
    flow[n] = choice[n].area_flow;
  }

  /* rebuild required nodes bottom-up */
  aig out;
  std::vector<aig_lit> new_lit( g.num_nodes(), aig_false );
  std::vector<bool> built( g.num_nodes(), false );
  for ( uint32_t i = 1; i <= g.num_pis(); ++i )
  {
    new_lit[i] = make_lit( out.add_pi(), false );
    built[i] = true;
  }
  built[0] = true;

  std::function<aig_lit( uint32_t )> build = [&]( uint32_t n ) -> aig_lit {
    if ( built[n] )
      return new_lit[n];
    auto const& ch = choice[n];
    std::vector<aig_lit> leaf_lits;
    for ( auto l : ch.c->leaves )
      leaf_lits.push_back( build( l ) );
    aig_lit res;
    if ( ch.use_record )
    {
      /* structure inputs live in the minimized-support space; query_vars
         maps them back to cut leaf positions */
      auto const& s = ch.hit->instantiated;
      std::vector<aig_lit> node_vals( s.nodes.size() );
      auto ref = [&]( uint32_t l ) -> aig_lit {
        uint32_t idx = l >> 1;
        aig_lit base = idx < s.k ? leaf_lits[ch.hit->query_vars[idx]] : node_vals[idx - s.k];
        return ( l & 1 ) ? lit_not( base ) : base;
      };
      for ( size_t i = 0; i < s.nodes.size(); ++i )
        node_vals[i] = out.and_( ref( s.nodes[i].f0 ), ref( s.nodes[i].f1 ) );
      res = ref( s.out );
    }
    else
    {
      auto cone = lms_detail::cone_structure( g, n, ch.c->leaves );
      auto const& s = *cone;
      std::vector<aig_lit> node_vals( s.nodes.size() );
      auto ref = [&]( uint32_t l ) -> aig_lit {
        uint32_t idx = l >> 1;
        aig_lit base = idx < s.k ? leaf_lits[idx] : node_vals[idx - s.k];
        return ( l & 1 ) ? lit_not( base ) : base;
      };
      for ( size_t i = 0; i < s.nodes.size(); ++i )
        node_vals[i] = out.and_( ref( s.nodes[i].f0 ), ref( s.nodes[i].f1 ) );
      res = ref( s.out );
    }
    new_lit[n] = res;
    built[n] = true;
    return res;
  };

  for ( auto o : g.outputs() )
  {
    uint32_t v = lit_node( o );
    aig_lit l = v == 0 ? aig_false : build( v );
    out.add_output( lit_comp( o ) ? lit_not( l ) : l );
  }
  return out;
}

/*! \brief Rebuilds maximal single-fanout AND trees as minimum-depth trees
 *         over leaf arrivals (two earliest first). OR trees balance through
 *         their De Morgan AND form; XOR ladders are left alone.
 */
inline aig balance( aig const& g )
{
  auto fanout = g.fanout_counts();
  aig out;
  std::vector<aig_lit> new_lit( g.num_nodes(), aig_false );
  std::vector<uint32_t> arr( g.num_pis() + 1, 0 ); // arrival per new node
  for ( uint32_t i = 1; i <= g.num_pis(); ++i )
    new_lit[i] = make_lit( out.add_pi(), false );

  auto arrival_of = [&]( aig_lit l ) -> uint32_t {
    uint32_t v = lit_node( l );
    return v < arr.size() ? arr[v] : 0;
  };

  /* node ids are topological, so super-gate roots see finished leaves */
  for ( uint32_t n = g.num_pis() + 1; n < g.num_nodes(); ++n )
  {
    /* maximal super-gate: expand non-complemented single-fanout AND fanins */
    std::vector<aig_lit> leaves;
    std::vector<aig_lit> work{ g.at( n ).fan0, g.at( n ).fan1 };
    while ( !work.empty() )
    {
      aig_lit l = work.back();
      work.pop_back();
      uint32_t v = lit_node( l );
      if ( !lit_comp( l ) && g.is_and( v ) && fanout[v] == 1 )
      {
        work.push_back( g.at( v ).fan0 );
        work.push_back( g.at( v ).fan1 );
      }
      else
      {
        leaves.push_back( l );
      }
    }
    /* combine the two earliest leaves repeatedly (optimal for unit delay) */
    std::vector<std::pair<uint64_t, aig_lit>> queue;
    for ( auto l : leaves )
    {
      aig_lit m = new_lit[lit_node( l )];
      if ( lit_comp( l ) )
        m = lit_not( m );
      queue.push_back( { ( uint64_t( arrival_of( m ) ) << 32 ) | m, m } );
    }
    std::sort( queue.begin(), queue.end() );
    while ( queue.size() > 1 )
    {
      auto a = queue[0], b = queue[1];
      queue.erase( queue.begin(), queue.begin() + 2 );
      aig_lit m = out.and_( a.second, b.second );
      uint32_t v = lit_node( m );
      if ( v >= arr.size() )
      {
        /* freshly created node: record its arrival; hashed or folded
           results keep the arrival they already have */
        arr.resize( v + 1, 0 );
        arr[v] = 1 + std::max( arrival_of( a.second ), arrival_of( b.second ) );
      }
      std::pair<uint64_t, aig_lit> entry{ ( uint64_t( arrival_of( m ) ) << 32 ) | m, m };
      queue.insert( std::upper_bound( queue.begin(), queue.end(), entry ), entry );
    }
    new_lit[n] = queue.empty() ? aig_true : queue[0].second;
  }

  for ( auto o : g.outputs() )
  {
    aig_lit l = lit_node( o ) == 0 ? aig_false : new_lit[lit_node( o )];
    out.add_output( lit_comp( o ) ? lit_not( l ) : l );
  }
  return out;
}

/*! \brief Single-node-window cleanup: rebuild through hashing with the
 *         absorption rule, dropping unreachable nodes.
 */
inline aig local_rewrite( aig const& g )
{
  aig out;
  std::vector<aig_lit> new_lit( g.num_nodes(), aig_false );
  for ( uint32_t i = 1; i <= g.num_pis(); ++i )
    new_lit[i] = make_lit( out.add_pi(), false );

  std::vector<bool> need( g.num_nodes(), false );
  for ( auto o : g.outputs() )
    need[lit_node( o )] = true;
  for ( uint32_t n = g.num_nodes(); n-- > 1; )
  {
    if ( need[n] && g.is_and( n ) )
    {
      need[lit_node( g.at( n ).fan0 )] = true;
      need[lit_node( g.at( n ).fan1 )] = true;
    }
  }
  for ( uint32_t n = g.num_pis() + 1; n < g.num_nodes(); ++n )
  {
    if ( !need[n] )
      continue;
    auto map = [&]( aig_lit l ) {
      aig_lit m = new_lit[lit_node( l )];
      return lit_comp( l ) ? lit_not( m ) : m;
    };
    new_lit[n] = out.and_absorb( map( g.at( n ).fan0 ), map( g.at( n ).fan1 ) );
  }
  for ( auto o : g.outputs() )
  {
    aig_lit l = lit_node( o ) == 0 ? aig_false : new_lit[lit_node( o )];
    out.add_output( lit_comp( o ) ? lit_not( l ) : l );
  }
  return out;
}

/*! \brief (ands, depth) quality point per script iteration. */
struct lms_trace_row
{
  uint32_t iteration;
  uint32_t ands;
  uint32_t depth;
};

/*! \brief Iterates [rehash -> lms_rewrite -> local_rewrite -> balance],
 *         tracing (ands, depth) per iteration. Reaches a fixpoint when an
 *         iteration changes nothing.
 */
inline aig lms_script( aig const& g_in, record_library const& lib, uint32_t iters, uint32_t k,
                       std::vector<lms_trace_row>* trace = nullptr )
{
  if ( iters < 1 || iters > 100 )
    throw std::invalid_argument( "iteration count must be within [1, 100]" );
  aig g = local_rewrite( g_in ); // initial hash/sweep
  bool fixed = false;
  for ( uint32_t i = 0; i < iters; ++i )
  {
    if ( !fixed )
    {
      aig next = balance( local_rewrite( lms_rewrite( g, lib, k ) ) );
      if ( next == g )
        fixed = true;
      else
        g = std::move( next );
    }
    if ( trace )
      trace->push_back( { i + 1, g.num_ands(), g.depth() } );
  }
  return g;
}

} // namespace synkit
