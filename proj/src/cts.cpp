#include "ctsem/cts.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace ctsem
{

cts::cts( poset_ptr conditions, fin_set alphabet, fin_set states, std::vector< transition > transitions,
          bits accepting )
    : _conditions{ std::move( conditions ) }, _alphabet{ std::move( alphabet ) }, _states{ std::move( states ) },
      _transitions{ std::move( transitions ) }, _accepting{ std::move( accepting ) }
{
    if ( _alphabet.size() > 64 )
        throw carrier_too_large( "alphabets are limited to 64 actions" );
    if ( _accepting.size() != _states.size() )
        throw dangling_reference( "accepting set over a different state set" );
    const auto nk = _conditions->size();
    const auto nx = _states.size();
    const auto na = _alphabet.size();
    for ( const auto& t : _transitions )
        if ( t.from >= nx || t.to >= nx || t.action >= na || t.cond >= nk )
            throw dangling_reference( "transition refers to an unknown element" );
    std::sort( _transitions.begin(), _transitions.end() );
    _transitions.erase( std::unique( _transitions.begin(), _transitions.end() ), _transitions.end() );

    _succ.assign( nk * nx * na, bits( nx ) );
    for ( const auto& t : _transitions )
        _succ[ ( t.cond * nx + t.from ) * na + t.action ].set( t.to );
}

cts cts::from_names( poset_ptr conditions, const std::vector< std::string >& alphabet,
                     const std::vector< std::string >& states, const std::vector< std::string >& accepting,
                     const std::vector< std::array< std::string, 4 > >& transitions )
{
    auto as = fin_set::of_names( alphabet );
    auto xs = fin_set::of_names( states );
    auto find = [ & ]( const fin_set& s, const std::string& name, const char* what ) {
        if ( !s.contains( value::atom( name ) ) )
            throw dangling_reference( std::string( "unknown " ) + what + " '" + name + "'" );
        return s.index_of_name( name );
    };
    bits acc( xs.size() );
    for ( const auto& name : accepting )
        acc.set( find( xs, name, "state" ) );
    std::vector< transition > ts;
    for ( const auto& [ from, action, cond, to ] : transitions )
        ts.push_back( { find( xs, from, "state" ), find( as, action, "action" ),
                        find( conditions->carrier(), cond, "condition" ), find( xs, to, "state" ) } );
    return { std::move( conditions ), std::move( as ), std::move( xs ), std::move( ts ), std::move( acc ) };
}

std::uint64_t cts::ready( std::size_t x, std::size_t k ) const
{
    std::uint64_t m = 0;
    for ( std::size_t a = 0; a < _alphabet.size(); ++a )
        if ( successors( x, a, k ).any() )
            m |= std::uint64_t{ 1 } << a;
    return m;
}

std::uint64_t cts::all_actions() const
{
    return _alphabet.size() == 64 ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << _alphabet.size() ) - 1;
}

bool operator==( const cts& a, const cts& b )
{
    return same_poset( a._conditions, b._conditions ) && a._alphabet == b._alphabet && a._states == b._states
           && a._transitions == b._transitions && a._accepting == b._accepting;
}

std::vector< transition > validate( const cts& c )
{
    std::set< transition > missing;
    const auto& all = c.transitions();
    for ( const auto& t : all )
    {
        const auto& below = c.conditions()->down_set( t.cond );
        for ( auto k = below.find_first(); k != bits::npos; k = below.find_next( k ) )
        {
            transition lower{ t.from, t.action, k, t.to };
            if ( k != t.cond && !std::binary_search( all.begin(), all.end(), lower ) )
                missing.insert( lower );
        }
    }
    return { missing.begin(), missing.end() };
}

cts complete( const cts& c )
{
    auto ts = c.transitions();
    for ( const auto& t : validate( c ) )
        ts.push_back( t );
    return { c.conditions(), c.alphabet(), c.states(), std::move( ts ), c.accepting() };
}

const char* to_string( observation_kind k )
{
    switch ( k )
    {
    case observation_kind::ready: return "ready";
    case observation_kind::failure: return "failure";
    default: return "acceptance";
    }
}

observation_mode::observation_mode( observation_kind kind, bool upgrades ) : _kind{ kind }, _upgrades{ upgrades }
{
    if ( kind == observation_kind::failure && upgrades )
        throw failure_with_upgrades(
            "failure observations are undefined with upgrades: a refusal set at k need not be a refusal set at "
            "k' <= k, so the observations are not down-closed in the conditions" );
}

observation_space make_observation_space( const observation_mode& mode, const fin_set& alphabet )
{
    observation_space o;
    o.kind = mode.kind();
    if ( mode.kind() == observation_kind::acceptance )
    {
        o.carrier = discrete( fin_set::of_names( { "accept" } ) );
        o.subsets = { 0 };
        o.index = { { 0, 0 } };
        return o;
    }
    if ( alphabet.size() > max_observed_actions )
        throw carrier_too_large( "ready and failure observations are limited to "
                                 + std::to_string( max_observed_actions ) + " actions" );
    const std::uint64_t count = std::uint64_t{ 1 } << alphabet.size();
    std::vector< value > vals;
    std::map< value, std::uint64_t > mask_of;
    for ( std::uint64_t m = 0; m < count; ++m )
    {
        std::vector< value > members;
        for ( std::size_t a = 0; a < alphabet.size(); ++a )
            if ( ( m >> a ) & 1U )
                members.push_back( alphabet.at( a ) );
        vals.push_back( value::set( std::move( members ) ) );
        mask_of.emplace( vals.back(), m );
    }
    fin_set carrier( vals );
    o.subsets.resize( carrier.size() );
    for ( std::size_t i = 0; i < carrier.size(); ++i )
    {
        o.subsets[ i ] = mask_of.at( carrier.at( i ) );
        o.index.emplace( o.subsets[ i ], i );
    }
    if ( !mode.upgrades() )
    {
        o.carrier = discrete( carrier );
        return o;
    }
    std::vector< bits > leq( carrier.size(), bits( carrier.size() ) );
    for ( std::size_t i = 0; i < carrier.size(); ++i )
        for ( std::size_t j = 0; j < carrier.size(); ++j )
            if ( ( o.subsets[ i ] & ~o.subsets[ j ] ) == 0 )
                leq[ i ].set( j );
    o.carrier = fin_poset::from_matrix( std::move( carrier ), leq );
    return o;
}

namespace
{

template < class F >
void for_each_submask( std::uint64_t m, F&& f )
{
    for ( std::uint64_t s = m;; s = ( s - 1 ) & m )
    {
        f( s );
        if ( s == 0 )
            break;
    }
}

// Conditions a step or observation at k may end in.
std::vector< std::size_t > reachable_conditions( const cts& c, std::size_t k, bool upgrades )
{
    if ( !upgrades )
        return { k };
    std::vector< std::size_t > out;
    const auto& below = c.conditions()->down_set( k );
    for ( auto j = below.find_first(); j != bits::npos; j = below.find_next( j ) )
        out.push_back( j );
    return out;
}

} // namespace

cts_coalgebra build_alpha( const cts& c, const observation_mode& mode )
{
    const auto b = mode.get_backend();
    auto obs = make_observation_space( mode, c.alphabet() );
    auto cond = mode.upgrades() ? c.conditions() : discrete( c.conditions()->carrier() );
    auto states = discrete( c.states() );
    auto space = make_machine_space( { c.alphabet(), obs.carrier }, cond, states );

    const auto nx = c.states().size();
    std::vector< bits > table( cond->size() * nx, bits( space.bx.g->size() ) );
    for ( std::size_t k = 0; k < cond->size(); ++k )
        for ( std::size_t x = 0; x < nx; ++x )
        {
            auto& cell = table[ k * nx + x ];
            auto mark = [ & ]( std::size_t k2, std::size_t j ) { cell.set( space.bx.index( k2, j ) ); };
            for ( auto k2 : reachable_conditions( c, k, mode.upgrades() ) )
            {
                for ( std::size_t a = 0; a < c.alphabet().size(); ++a )
                {
                    const auto& next = c.successors( x, a, k2 );
                    for ( auto y = next.find_first(); y != bits::npos; y = next.find_next( y ) )
                        mark( k2, space.b_left( a, y ) );
                }
                switch ( mode.kind() )
                {
                case observation_kind::acceptance:
                    if ( c.is_accepting( x ) )
                        mark( k2, space.b_right( 0 ) );
                    break;
                case observation_kind::ready:
                    for_each_submask( c.ready( x, k2 ),
                                      [ & ]( std::uint64_t u ) { mark( k2, space.b_right( obs.index.at( u ) ) ); } );
                    break;
                case observation_kind::failure:
                    for_each_submask( c.all_actions() & ~c.ready( x, k2 ),
                                      [ & ]( std::uint64_t u ) { mark( k2, space.b_right( obs.index.at( u ) ) ); } );
                    break;
                }
            }
        }
    auto alpha = relkl_arrow::make( b, space.x, space.bx, std::move( table ) );
    return { mode, std::move( obs ), std::move( space ), std::move( alpha ) };
}

std::size_t max_word_length( std::size_t letters )
{
    const auto base = static_cast< std::uint64_t >( letters ) + 1;
    if ( base < 2 )
        return std::numeric_limits< std::size_t >::max();
    std::size_t len = 0;
    std::uint64_t cap = 1; // base^len
    while ( cap <= std::numeric_limits< std::uint64_t >::max() / base )
    {
        cap *= base;
        ++len;
    }
    // Codes of length len stay below base^(len + 1) - 1 only if that fits.
    return len - 1;
}

word append( const word& w, std::size_t a, std::size_t letters )
{
    return { w.code * ( letters + 1 ) + a + 1, w.length + 1 };
}

word prepend( std::size_t a, const word& w, std::size_t letters )
{
    std::uint64_t scale = 1;
    for ( std::uint32_t i = 0; i < w.length; ++i )
        scale *= letters + 1;
    return { ( a + 1 ) * scale + w.code, w.length + 1 };
}

std::vector< std::size_t > spell( const word& w, std::size_t letters )
{
    std::vector< std::size_t > out( w.length );
    auto code = w.code;
    for ( auto i = w.length; i-- > 0; )
    {
        out[ i ] = code % ( letters + 1 ) - 1;
        code /= letters + 1;
    }
    return out;
}

word make_word( const std::vector< std::size_t >& as, std::size_t letters )
{
    word w;
    for ( auto a : as )
        w = append( w, a, letters );
    return w;
}

std::string word_str( const word& w, const fin_set& alphabet )
{
    if ( w.length == 0 )
        return "eps";
    bool multi = false;
    for ( const auto& v : alphabet.elements() )
        multi = multi || v.str().size() > 1;
    std::string s;
    for ( auto a : spell( w, alphabet.size() ) )
    {
        if ( multi && !s.empty() )
            s += '.';
        s += alphabet.at( a ).str();
    }
    return s;
}

std::string subset_mask_str( std::uint64_t m, const fin_set& alphabet )
{
    std::string s = "{";
    bool first = true;
    for ( std::size_t a = 0; a < alphabet.size(); ++a )
        if ( ( m >> a ) & 1U )
        {
            s += ( first ? "" : "," ) + alphabet.at( a ).str();
            first = false;
        }
    return s + "}";
}

namespace
{

void require_word_length( std::size_t len, std::size_t letters )
{
    if ( len > max_word_length( letters ) )
        throw carrier_too_large( "words of length " + std::to_string( len ) + " exceed the word encoding" );
}

void require_state( const cts& c, std::size_t x, std::size_t k )
{
    if ( x >= c.states().size() )
        throw unknown_element( "state index " + std::to_string( x ) );
    if ( k >= c.conditions()->size() )
        throw unknown_element( "condition index " + std::to_string( k ) );
}

// Visits every word of the k-slice up to max_len with its (nonempty) set of
// endpoints, in shortlex order.
template < class F >
void slice_search( const cts& c, std::size_t x, std::size_t k, std::size_t max_len, F&& visit )
{
    require_state( c, x, k );
    require_word_length( max_len, c.alphabet().size() );
    const auto na = c.alphabet().size();
    bits start( c.states().size() );
    start.set( x );
    std::vector< std::pair< word, bits > > layer{ { word{}, start } };
    for ( std::size_t len = 0; !layer.empty(); ++len )
    {
        std::vector< std::pair< word, bits > > next;
        for ( const auto& [ w, reach ] : layer )
        {
            visit( w, reach );
            if ( len == max_len )
                continue;
            for ( std::size_t a = 0; a < na; ++a )
            {
                bits to( c.states().size() );
                for ( auto s = reach.find_first(); s != bits::npos; s = reach.find_next( s ) )
                    to |= c.successors( s, a, k );
                if ( to.any() )
                    next.emplace_back( append( w, a, na ), std::move( to ) );
            }
        }
        layer = std::move( next );
    }
}

template < class Obs >
std::vector< std::pair< word, std::uint64_t > > decorated( const cts& c, std::size_t x, std::size_t k,
                                                           std::size_t max_len, Obs&& observations )
{
    std::vector< std::pair< word, std::uint64_t > > out;
    slice_search( c, x, k, max_len, [ & ]( const word& w, const bits& reach ) {
        std::set< std::uint64_t > us;
        for ( auto s = reach.find_first(); s != bits::npos; s = reach.find_next( s ) )
            for_each_submask( observations( s ), [ & ]( std::uint64_t u ) { us.insert( u ); } );
        for ( auto u : us )
            out.emplace_back( w, u );
    } );
    return out;
}

} // namespace

std::vector< word > direct_language( const cts& c, std::size_t x, std::size_t k, std::size_t max_len )
{
    std::vector< word > out;
    slice_search( c, x, k, max_len, [ & ]( const word& w, const bits& reach ) {
        if ( reach.intersects( c.accepting() ) )
            out.push_back( w );
    } );
    return out;
}

std::vector< std::pair< word, std::uint64_t > > direct_ready( const cts& c, std::size_t x, std::size_t k,
                                                              std::size_t max_len )
{
    return decorated( c, x, k, max_len, [ & ]( std::size_t s ) { return c.ready( s, k ); } );
}

std::vector< std::pair< word, std::uint64_t > > direct_failure( const cts& c, std::size_t x, std::size_t k,
                                                                std::size_t max_len )
{
    return decorated( c, x, k, max_len, [ & ]( std::size_t s ) { return c.all_actions() & ~c.ready( s, k ); } );
}

std::size_t decorated_behaviour::trace_count() const
{
    std::size_t n = 0;
    for ( const auto& cell : cells )
        for ( const auto& [ w, m ] : cell )
            n += static_cast< std::size_t >( std::popcount( m ) );
    return n;
}

namespace
{

using cell_t = std::vector< std::pair< word, std::uint64_t > >;

void normalize( cell_t& cell )
{
    std::sort( cell.begin(), cell.end() );
    std::size_t out = 0;
    for ( std::size_t i = 0; i < cell.size(); ++i )
    {
        if ( out > 0 && cell[ out - 1 ].first == cell[ i ].first )
            cell[ out - 1 ].second |= cell[ i ].second;
        else
            cell[ out++ ] = cell[ i ];
    }
    cell.resize( out );
}

void require_decoration_width( std::size_t conditions, std::size_t observations )
{
    if ( conditions * observations > 64 )
        throw carrier_too_large( "conditions x observations beyond 64 decorations per word" );
}

} // namespace

decorated_behaviour fixpoint_traces( const cts_coalgebra& alpha, std::size_t depth )
{
    const auto& sp = alpha.space;
    const auto nk = sp.x.cond->size();
    const auto nx = sp.x.base->size();
    const auto na = sp.shape.alphabet.size();
    const auto no = alpha.obs.size();
    const auto nbx = sp.bx.base->size();
    require_decoration_width( nk, no );
    // One unfolding past the depth tells whether the iterate is already the fixpoint.
    require_word_length( depth, na );

    // alpha, split into its observation decorations and its steps (k'', a, x').
    struct step
    {
        std::size_t k, a, x;
    };
    std::vector< std::uint64_t > observed( nk * nx, 0 );
    std::vector< std::vector< step > > steps( nk * nx );
    for ( std::size_t k = 0; k < nk; ++k )
        for ( std::size_t x = 0; x < nx; ++x )
        {
            const auto& cell = alpha.alpha( k, x );
            for ( auto i = cell.find_first(); i != bits::npos; i = cell.find_next( i ) )
            {
                const auto k2 = i / nbx;
                const auto j = i % nbx;
                if ( j < na * nx )
                    steps[ k * nx + x ].push_back( { k2, j / nx, j % nx } );
                else
                    observed[ k * nx + x ] |= std::uint64_t{ 1 } << ( k2 * no + ( j - na * nx ) );
            }
        }

    decorated_behaviour f{ nk, nx, no, std::vector< cell_t >( nk * nx ), false, 0 };
    for ( std::size_t n = 0;; ++n )
    {
        std::vector< cell_t > next( nk * nx );
        for ( std::size_t c = 0; c < nk * nx; ++c )
        {
            auto& out = next[ c ];
            if ( observed[ c ] )
                out.emplace_back( word{}, observed[ c ] );
            for ( const auto& s : steps[ c ] )
                for ( const auto& [ w, m ] : f.cells[ s.k * nx + s.x ] )
                    out.emplace_back( prepend( s.a, w, na ), m );
            normalize( out );
        }
        if ( next == f.cells )
        {
            f.stabilized = true;
            break;
        }
        if ( n == depth )
            break;
        f.cells = std::move( next );
        ++f.iterations;
    }
    return f;
}

decorated_behaviour closed_form_traces( const cts& c, const observation_mode& mode, std::size_t depth )
{
    auto obs = make_observation_space( mode, c.alphabet() );
    const auto nk = c.conditions()->size();
    const auto nx = c.states().size();
    const auto no = obs.size();
    require_decoration_width( nk, no );
    decorated_behaviour f{ nk, nx, no, std::vector< cell_t >( nk * nx ), false, 0 };
    if ( depth == 0 )
        return f;

    // Per (k', x): the decorated traces of the k'-slice, as (word, bit).
    std::vector< cell_t > direct( nk * nx );
    for ( std::size_t k = 0; k < nk; ++k )
        for ( std::size_t x = 0; x < nx; ++x )
        {
            auto& out = direct[ k * nx + x ];
            if ( mode.kind() == observation_kind::acceptance )
                for ( const auto& w : direct_language( c, x, k, depth - 1 ) )
                    out.emplace_back( w, std::uint64_t{ 1 } << ( k * no ) );
            else
            {
                auto pairs = mode.kind() == observation_kind::ready ? direct_ready( c, x, k, depth - 1 )
                                                                    : direct_failure( c, x, k, depth - 1 );
                for ( const auto& [ w, u ] : pairs )
                    out.emplace_back( w, std::uint64_t{ 1 } << ( k * no + obs.index.at( u ) ) );
            }
        }

    for ( std::size_t k = 0; k < nk; ++k )
        for ( std::size_t x = 0; x < nx; ++x )
        {
            auto& out = f.cells[ k * nx + x ];
            for ( auto k2 : reachable_conditions( c, k, mode.upgrades() ) )
                out.insert( out.end(), direct[ k2 * nx + x ].begin(), direct[ k2 * nx + x ].end() );
            normalize( out );
        }
    return f;
}

law_report coincidence_check( const cts& c, const observation_mode& mode, std::size_t depth )
{
    auto alpha = build_alpha( c, mode );
    auto fix = fixpoint_traces( alpha, depth );
    auto closed = closed_form_traces( c, mode, depth );
    const auto& conds = *c.conditions();
    const auto no = alpha.obs.size();

    auto decoration_str = [ & ]( std::size_t bit ) {
        const auto o = bit % no;
        return conds.at( bit / no ).str() + " / "
               + ( mode.kind() == observation_kind::acceptance ? std::string( "accept" )
                                                               : subset_mask_str( alpha.obs.subsets[ o ], c.alphabet() ) );
    };

    law_report rep;
    auto& eq = rep.add( "fixpoint iterate equals the closed form on words shorter than the depth",
                        "every (condition, state) at depth " + std::to_string( depth )
                            + ( fix.stabilized ? ", stabilized" : "" ) );
    for ( std::size_t k = 0; k < fix.conditions; ++k )
        for ( std::size_t x = 0; x < fix.states; ++x )
        {
            const auto& a = fix.cell( k, x );
            const auto& b = closed.cell( k, x );
            record( eq, a == b, [ & ] {
                // First word where the decorations differ.
                std::map< word, std::pair< std::uint64_t, std::uint64_t > > diff;
                for ( const auto& [ w, m ] : a )
                    diff[ w ].first = m;
                for ( const auto& [ w, m ] : b )
                    diff[ w ].second = m;
                for ( const auto& [ w, ms ] : diff )
                    if ( ms.first != ms.second )
                    {
                        const auto only = ms.first & ~ms.second ? ms.first & ~ms.second : ms.second & ~ms.first;
                        return "(" + conds.at( k ).str() + ", " + c.states().at( x ).str() + "): "
                               + decoration_str( static_cast< std::size_t >( std::countr_zero( only ) ) ) + " on "
                               + word_str( w, c.alphabet() ) + " only in the "
                               + ( ms.first & ~ms.second ? "fixpoint iterate" : "closed form" );
                    }
                return std::string( "cells differ" );
            } );
        }

    if ( mode.upgrades() )
    {
        // Decorations are down-closed in conditions x observations.
        auto& down = rep.add( "decorations are down-closed in conditions and observations" );
        auto decorations = product( alpha.space.x.cond, alpha.obs.carrier );
        for ( const auto& cell : fix.cells )
            for ( const auto& [ w, m ] : cell )
            {
                bits s( decorations->size() );
                for ( std::size_t i = 0; i < s.size(); ++i )
                    if ( ( m >> i ) & 1U )
                        s.set( i );
                record( down, is_down_closed( *decorations, s ),
                        [ & ] { return "word " + word_str( w, c.alphabet() ) + " decorated by " + subset_str( decorations->carrier(), s ); } );
            }
    }
    return rep;
}

namespace
{

// Canonical observation summary of a set of states under one condition:
// the maximal observed action sets (a single empty set for acceptance).
std::vector< std::uint64_t > summary( const cts& c, observation_kind kind, std::size_t k, const bits& states )
{
    std::vector< std::uint64_t > sets;
    for ( auto s = states.find_first(); s != bits::npos; s = states.find_next( s ) )
    {
        switch ( kind )
        {
        case observation_kind::acceptance:
            if ( c.is_accepting( s ) )
                sets.push_back( 0 );
            break;
        case observation_kind::ready: sets.push_back( c.ready( s, k ) ); break;
        case observation_kind::failure: sets.push_back( c.all_actions() & ~c.ready( s, k ) ); break;
        }
    }
    std::vector< std::uint64_t > maximal;
    for ( auto u : sets )
    {
        bool dominated = false;
        for ( auto v : sets )
            dominated = dominated || ( u != v && ( u & ~v ) == 0 );
        if ( !dominated )
            maximal.push_back( u );
    }
    std::sort( maximal.begin(), maximal.end() );
    maximal.erase( std::unique( maximal.begin(), maximal.end() ), maximal.end() );
    return maximal;
}

// Subset construction of the k-slice from the given starting states.
struct determinised
{
    std::vector< bits > states;
    std::map< bits, std::size_t > index;
    std::vector< std::vector< std::size_t > > delta;

    std::size_t add( const bits& s )
    {
        auto [ it, fresh ] = index.emplace( s, states.size() );
        if ( fresh )
            states.push_back( s );
        return it->second;
    }
};

determinised determinise( const cts& c, std::size_t k, const std::vector< std::size_t >& starts )
{
    determinised d;
    const auto na = c.alphabet().size();
    for ( auto x : starts )
    {
        bits s( c.states().size() );
        s.set( x );
        d.add( s );
    }
    for ( std::size_t i = 0; i < d.states.size(); ++i )
    {
        std::vector< std::size_t > row( na );
        for ( std::size_t a = 0; a < na; ++a )
        {
            bits to( c.states().size() );
            const auto from = d.states[ i ];
            for ( auto s = from.find_first(); s != bits::npos; s = from.find_next( s ) )
                to |= c.successors( s, a, k );
            row[ a ] = d.add( to );
        }
        d.delta.push_back( std::move( row ) );
    }
    return d;
}

// Moore refinement; returns the block of every state.
std::vector< std::size_t > refine( const determinised& d, const std::vector< std::vector< std::uint64_t > >& labels )
{
    const auto n = d.states.size();
    std::vector< std::size_t > block( n );
    {
        std::map< std::vector< std::uint64_t >, std::size_t > ids;
        for ( std::size_t i = 0; i < n; ++i )
            block[ i ] = ids.emplace( labels[ i ], ids.size() ).first->second;
    }
    for ( std::size_t blocks = 0;; )
    {
        std::map< std::vector< std::size_t >, std::size_t > ids;
        std::vector< std::size_t > next( n );
        for ( std::size_t i = 0; i < n; ++i )
        {
            std::vector< std::size_t > sig{ block[ i ] };
            for ( auto j : d.delta[ i ] )
                sig.push_back( block[ j ] );
            next[ i ] = ids.emplace( sig, ids.size() ).first->second;
        }
        block = std::move( next );
        if ( ids.size() == blocks )
            return block;
        blocks = ids.size();
    }
}

} // namespace

equiv_verdict behaviour_equiv( const cts& c, const observation_mode& mode, std::size_t x, std::size_t y,
                               std::optional< std::size_t > at_condition )
{
    const auto nk = c.conditions()->size();
    require_state( c, x, 0 );
    require_state( c, y, 0 );
    std::vector< std::size_t > conds;
    if ( at_condition )
    {
        require_state( c, x, *at_condition );
        const auto& below = c.conditions()->down_set( *at_condition );
        for ( auto k = below.find_first(); k != bits::npos; k = below.find_next( k ) )
            conds.push_back( k );
    }
    else
        for ( std::size_t k = 0; k < nk; ++k )
            conds.push_back( k );

    equiv_verdict v;
    const auto na = c.alphabet().size();
    for ( auto k : conds )
    {
        auto d = determinise( c, k, { x, y } );
        std::vector< std::vector< std::uint64_t > > labels;
        for ( const auto& s : d.states )
            labels.push_back( summary( c, mode.kind(), k, s ) );
        v.det_states = std::max( v.det_states, d.states.size() );
        auto block = refine( d, labels );
        const auto sx = d.index.at( d.states[ 0 ] );
        const auto sy = d.states.size() > 1 && x != y ? std::size_t{ 1 } : sx;
        if ( block[ sx ] == block[ sy ] )
            continue;

        // Shortest distinguishing word over the product, letters in order.
        // Observations of the first state are preferred: the whole product is
        // searched for one before falling back to the second state's.
        auto uncovered = []( const std::vector< std::uint64_t >& from,
                             const std::vector< std::uint64_t >& in ) -> std::optional< std::uint64_t > {
            for ( auto u : from )
                if ( std::none_of( in.begin(), in.end(), [ u ]( auto other ) { return ( u & ~other ) == 0; } ) )
                    return u;
            return std::nullopt;
        };
        std::optional< equiv_witness > fallback;
        std::map< std::pair< std::size_t, std::size_t >, word > seen{ { { sx, sy }, word{} } };
        std::deque< std::pair< std::size_t, std::size_t > > queue{ { sx, sy } };
        while ( !queue.empty() )
        {
            auto [ p, q ] = queue.front();
            queue.pop_front();
            const auto w = seen.at( { p, q } );
            auto observation = [ & ]( std::uint64_t u ) {
                return mode.kind() == observation_kind::acceptance ? std::nullopt : std::optional( u );
            };
            if ( auto u = uncovered( labels[ p ], labels[ q ] ) )
            {
                v.equivalent = false;
                v.witness = equiv_witness{ k, w, observation( *u ), true };
                return v;
            }
            if ( auto u = uncovered( labels[ q ], labels[ p ] ); u && !fallback )
                fallback = equiv_witness{ k, w, observation( *u ), false };
            for ( std::size_t a = 0; a < na; ++a )
            {
                std::pair next{ d.delta[ p ][ a ], d.delta[ q ][ a ] };
                if ( seen.emplace( next, append( w, a, na ) ).second )
                    queue.push_back( next );
            }
        }
        if ( fallback )
        {
            v.equivalent = false;
            v.witness = fallback;
            return v;
        }
        throw std::logic_error( "refinement separated two states the product search could not" );
    }
    return v;
}

std::optional< refusal_violation > refusal_downclosure_witness( const cts& c )
{
    const auto& conds = *c.conditions();
    for ( std::size_t k = 0; k < conds.size(); ++k )
        for ( std::size_t x = 0; x < c.states().size(); ++x )
        {
            const auto& below = conds.down_set( k );
            for ( auto k2 = below.find_first(); k2 != bits::npos; k2 = below.find_next( k2 ) )
            {
                const auto gained = c.ready( x, k2 ) & ~c.ready( x, k );
                if ( k2 != k && gained )
                    return refusal_violation{ k, x, k2, gained & ( ~gained + 1 ) };
            }
        }
    return std::nullopt;
}

cts random_cts( std::uint64_t seed, const random_cts_params& params )
{
    std::mt19937_64 rng( seed );
    auto pick = [ & ]( std::size_t n ) { return static_cast< std::size_t >( rng() % n ); };
    const auto nk = 1 + pick( params.max_conditions );
    const auto nx = 1 + pick( params.max_states );
    const auto na = 1 + pick( params.max_actions );

    std::vector< std::string > ks, xs, as;
    for ( std::size_t i = 0; i < nk; ++i )
        ks.push_back( "k" + std::to_string( i ) );
    for ( std::size_t i = 0; i < nx; ++i )
        xs.push_back( "x" + std::to_string( i ) );
    for ( std::size_t i = 0; i < na; ++i )
        as.push_back( std::string( 1, static_cast< char >( 'a' + i ) ) );

    // Order pairs only go upwards in index order, so the closure is antisymmetric.
    std::vector< std::pair< std::size_t, std::size_t > > order;
    if ( !params.discrete_conditions )
        for ( std::size_t i = 0; i < nk; ++i )
            for ( std::size_t j = i + 1; j < nk; ++j )
                if ( pick( 3 ) == 0 )
                    order.emplace_back( i, j );
    auto conds = fin_poset::closure( fin_set::of_names( ks ), order );

    std::vector< transition > ts;
    for ( std::size_t x = 0; x < nx; ++x )
        for ( std::size_t a = 0; a < na; ++a )
            for ( std::size_t k = 0; k < nk; ++k )
                for ( std::size_t y = 0; y < nx; ++y )
                    if ( pick( params.density ) == 0 )
                        ts.push_back( { x, a, k, y } );
    bits acc( nx );
    for ( std::size_t x = 0; x < nx; ++x )
        if ( pick( 2 ) == 0 )
            acc.set( x );
    return complete( cts( conds, fin_set::of_names( as ), fin_set::of_names( xs ), std::move( ts ), std::move( acc ) ) );
}

cts example_e1()
{
    return cts::from_names( discrete( fin_set::of_names( { "p", "q" } ) ), { "a", "b" }, { "x", "y", "z" }, { "z" },
                            { { { "x", "a", "p", "y" } }, { { "y", "b", "p", "z" } }, { { "x", "a", "q", "z" } } } );
}

cts example_e2()
{
    return cts::from_names( chain( { "k2", "k1" } ), { "a" }, { "x", "y" }, { "y" },
                            { { { "x", "a", "k2", "y" } } } );
}

} // namespace ctsem
