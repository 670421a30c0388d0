#pragma once

// Independent reference computations used by the tests and the acceptance run.
// None of these call the algorithm they check.

#include "ctsem/cts.hpp"
#include "ctsem/dlaw.hpp"
#include "ctsem/transport.hpp"

#include <map>
#include <set>

namespace oracle
{

using namespace ctsem;

// Minimum over every basic feasible solution: choose m + n - 1 cells, solve
// the flow on them by peeling rows and columns with a single open cell.
inline rational transport_by_vertices( const std::vector< rational >& supply, const std::vector< rational >& demand,
                                       const std::vector< std::vector< rational > >& cost )
{
    const auto m = supply.size();
    const auto n = demand.size();
    const auto cells = m * n;
    const auto basis = m + n - 1;
    std::optional< rational > best;
    for ( std::uint32_t mask = 0; mask < ( 1U << cells ); ++mask )
    {
        if ( static_cast< std::size_t >( std::popcount( mask ) ) != basis )
            continue;
        auto s = supply;
        auto d = demand;
        std::vector< rational > flow( cells );
        auto open = mask;
        bool stuck = false;
        while ( open && !stuck )
        {
            stuck = true;
            for ( std::size_t i = 0; i < m && stuck; ++i )
            {
                int count = 0;
                std::size_t cell = 0;
                for ( std::size_t j = 0; j < n; ++j )
                    if ( ( open >> ( i * n + j ) ) & 1U )
                        ++count, cell = i * n + j;
                if ( count == 1 )
                {
                    flow[ cell ] = s[ i ];
                    d[ cell % n ] -= s[ i ];
                    s[ i ] = 0;
                    open &= ~( 1U << cell );
                    stuck = false;
                }
            }
            for ( std::size_t j = 0; j < n && stuck; ++j )
            {
                int count = 0;
                std::size_t cell = 0;
                for ( std::size_t i = 0; i < m; ++i )
                    if ( ( open >> ( i * n + j ) ) & 1U )
                        ++count, cell = i * n + j;
                if ( count == 1 )
                {
                    flow[ cell ] = d[ j ];
                    s[ cell / n ] -= d[ j ];
                    d[ j ] = 0;
                    open &= ~( 1U << cell );
                    stuck = false;
                }
            }
        }
        if ( stuck )
            continue;
        bool feasible = std::all_of( s.begin(), s.end(), []( auto& v ) { return v == 0; } )
                        && std::all_of( d.begin(), d.end(), []( auto& v ) { return v == 0; } )
                        && std::all_of( flow.begin(), flow.end(), []( auto& v ) { return v >= 0; } );
        if ( !feasible )
            continue;
        rational total = 0;
        for ( std::size_t c = 0; c < cells; ++c )
            total += flow[ c ] * cost[ c / n ][ c % n ];
        if ( !best || total < *best )
            best = total;
    }
    return *best;
}

// vartheta(a, U) = {(a, x) | x in U}, vartheta(o) = {o}, read off the element
// structure of F T X.
inline std::set< value > dlaw_closed_form( functor_kind kind, const value& v )
{
    auto spread = [ & ]( const value& pair ) {
        std::set< value > out;
        for ( const auto& x : pair.second().parts() )
            out.insert( value::pair( pair.first(), x ) );
        return out;
    };
    if ( kind == functor_kind::a )
        return spread( v );
    if ( v.get_kind() == value::kind::right )
        return { v };
    std::set< value > out;
    for ( const auto& e : spread( v.inner() ) )
        out.insert( value::left( e ) );
    return out;
}

using letters = std::vector< std::size_t >;

// Every path of the k-slice from x up to max_len steps, one callback per path.
template < class F >
void each_path( const cts& c, std::size_t x, std::size_t k, std::size_t max_len, F&& visit )
{
    letters w;
    auto go = [ & ]( auto&& self, std::size_t s ) -> void {
        visit( w, s );
        if ( w.size() == max_len )
            return;
        for ( std::size_t a = 0; a < c.alphabet().size(); ++a )
            for ( const auto& t : c.transitions() )
                if ( t.from == s && t.action == a && t.cond == k )
                {
                    w.push_back( a );
                    self( self, t.to );
                    w.pop_back();
                }
    };
    go( go, x );
}

inline std::uint64_t enabled( const cts& c, std::size_t s, std::size_t k )
{
    std::uint64_t m = 0;
    for ( const auto& t : c.transitions() )
        if ( t.from == s && t.cond == k )
            m |= std::uint64_t{ 1 } << t.action;
    return m;
}

inline std::set< letters > language( const cts& c, std::size_t x, std::size_t k, std::size_t max_len )
{
    std::set< letters > out;
    each_path( c, x, k, max_len, [ & ]( const letters& w, std::size_t s ) {
        if ( c.accepting()[ s ] )
            out.insert( w );
    } );
    return out;
}

// Pairs (w, U), U ranging over all subsets of the ready (or refused) actions.
inline std::set< std::pair< letters, std::uint64_t > > decorated( const cts& c, std::size_t x, std::size_t k,
                                                                  std::size_t max_len, bool refusals )
{
    const std::uint64_t all = ( std::uint64_t{ 1 } << c.alphabet().size() ) - 1;
    std::set< std::pair< letters, std::uint64_t > > out;
    each_path( c, x, k, max_len, [ & ]( const letters& w, std::size_t s ) {
        const auto r = refusals ? all & ~enabled( c, s, k ) : enabled( c, s, k );
        for ( std::uint64_t u = 0; u <= all; ++u )
            if ( ( u & ~r ) == 0 )
                out.insert( { w, u } );
    } );
    return out;
}

// Observations (as action sets; {0} for acceptance) available from a set of
// states under k, subset-closed.
inline std::set< std::uint64_t > observations( const cts& c, observation_kind kind, std::size_t k,
                                               const std::set< std::size_t >& states )
{
    const std::uint64_t all = ( std::uint64_t{ 1 } << c.alphabet().size() ) - 1;
    std::set< std::uint64_t > out;
    for ( auto s : states )
    {
        if ( kind == observation_kind::acceptance )
        {
            if ( c.accepting()[ s ] )
                out.insert( 0 );
            continue;
        }
        const auto r = kind == observation_kind::ready ? enabled( c, s, k ) : all & ~enabled( c, s, k );
        for ( std::uint64_t u = 0; u <= all; ++u )
            if ( ( u & ~r ) == 0 )
                out.insert( u );
    }
    return out;
}

inline std::set< std::size_t > after( const cts& c, std::size_t k, const std::set< std::size_t >& from, std::size_t a )
{
    std::set< std::size_t > out;
    for ( const auto& t : c.transitions() )
        if ( t.cond == k && t.action == a && from.count( t.from ) )
            out.insert( t.to );
    return out;
}

inline std::set< std::size_t > reach( const cts& c, std::size_t k, std::size_t x, const letters& w )
{
    std::set< std::size_t > s{ x };
    for ( auto a : w )
        s = after( c, k, s, a );
    return s;
}

// Whether x and y show the same decorated traces of length <= depth under
// every relevant condition: a level-by-level sweep over pairs of reach sets.
inline bool equal_up_to( const cts& c, observation_kind kind, std::size_t x, std::size_t y,
                         const std::vector< std::size_t >& conditions, std::size_t depth )
{
    for ( auto k : conditions )
    {
        std::set< std::pair< std::set< std::size_t >, std::set< std::size_t > > > level{ { { x }, { y } } };
        for ( std::size_t len = 0; len <= depth && !level.empty(); ++len )
        {
            decltype( level ) next;
            for ( const auto& [ sx, sy ] : level )
            {
                if ( observations( c, kind, k, sx ) != observations( c, kind, k, sy ) )
                    return false;
                for ( std::size_t a = 0; a < c.alphabet().size(); ++a )
                {
                    auto nx = after( c, k, sx, a );
                    auto ny = after( c, k, sy, a );
                    if ( !nx.empty() || !ny.empty() )
                        next.insert( { nx, ny } );
                }
            }
            level = std::move( next );
        }
    }
    return true;
}

// Decorated traces of (x, k0) as words of length < depth, each with the set
// of (final condition, observation) bits k * |O| + o. Every step may first
// upgrade to any lower condition when `upgrades`; endpoints are decorated at
// their own condition and, with upgrades, at every condition below it.
// `obs_index` maps an action set to its index in O (ignored for acceptance).
inline std::map< letters, std::uint64_t > decorated_traces( const cts& c, observation_kind kind, bool upgrades,
                                                            const std::map< std::uint64_t, std::size_t >& obs_index,
                                                            std::size_t x, std::size_t k0, std::size_t depth )
{
    const auto& order = *c.conditions();
    const auto nk = order.size(), ns = c.states().size(), na = c.alphabet().size();
    const std::size_t width = kind == observation_kind::acceptance ? 1 : obs_index.size();

    // Per (state, condition): the decoration bits reachable by upgrading, and the
    // successors per letter after any upgrade.
    std::vector< std::uint64_t > decoration( ns * nk );
    std::vector< std::vector< std::set< std::pair< std::size_t, std::size_t > > > > moves(
        ns * nk, std::vector< std::set< std::pair< std::size_t, std::size_t > > >( na ) );
    for ( std::size_t s = 0; s < ns; ++s )
        for ( std::size_t k = 0; k < nk; ++k )
            for ( std::size_t j = 0; j < nk; ++j )
            {
                if ( j != k && !( upgrades && order.leq( j, k ) ) )
                    continue;
                for ( auto o : observations( c, kind, j, { s } ) )
                    decoration[ s * nk + k ] |= std::uint64_t{ 1 }
                                                << ( j * width + ( kind == observation_kind::acceptance ? 0 : obs_index.at( o ) ) );
                for ( std::size_t a = 0; a < na; ++a )
                    for ( auto t : after( c, j, { s }, a ) )
                        moves[ s * nk + k ][ a ].insert( { t, j } );
            }

    std::map< letters, std::uint64_t > out;
    std::map< letters, std::set< std::pair< std::size_t, std::size_t > > > level{ { {}, { { x, k0 } } } };
    for ( std::size_t len = 0; len < depth && !level.empty(); ++len )
    {
        decltype( level ) next;
        for ( const auto& [ w, configs ] : level )
            for ( const auto& [ s, k ] : configs )
            {
                if ( auto d = decoration[ s * nk + k ] )
                    out[ w ] |= d;
                if ( len + 1 == depth )
                    continue;
                for ( std::size_t a = 0; a < na; ++a )
                {
                    const auto& m = moves[ s * nk + k ][ a ];
                    if ( m.empty() )
                        continue;
                    auto v = w;
                    v.push_back( a );
                    next[ v ].insert( m.begin(), m.end() );
                }
            }
        level = std::move( next );
    }
    return out;
}

} // namespace oracle
