#include "ctsem/monads.hpp"

namespace ctsem
{

const char* to_string( backend b )
{
    return b == backend::set ? "set" : "pos";
}

bits p_unit( std::size_t n, std::size_t x )
{
    bits out( n );
    out.set( x );
    return out;
}

bits p_mult( std::size_t n, const std::vector< bits >& family )
{
    bits out( n );
    for ( const auto& s : family )
        out |= s;
    return out;
}

bits p_map( const mapping& f, std::size_t cod_size, const bits& s )
{
    bits out( cod_size );
    for ( auto i = s.find_first(); i != bits::npos; i = s.find_next( i ) )
        out.set( f.at( i ) );
    return out;
}

bits pd_unit( const fin_poset& p, std::size_t x )
{
    return p.down_set( x );
}

bits pd_mult( const fin_poset& p, const std::vector< bits >& family )
{
    for ( const auto& s : family )
        if ( !is_down_closed( p, s ) )
            throw not_down_closed( "multiplication input " + subset_str( p.carrier(), s ) + " is not down-closed" );
    return p_mult( p.size(), family );
}

bits pd_map( const mapping& f, const fin_poset& dom, const fin_poset& cod, const bits& s )
{
    if ( !is_monotone( f, dom, cod ) )
        throw not_monotone( "downset map along a non-monotone function" );
    if ( !is_down_closed( dom, s ) )
        throw not_down_closed( "downset map input " + subset_str( dom.carrier(), s ) + " is not down-closed" );
    return down_close( cod, p_map( f, cod.size(), s ) );
}

bits t_unit( monad_kind m, const fin_poset& p, std::size_t x )
{
    return m == monad_kind::powerset ? p_unit( p.size(), x ) : pd_unit( p, x );
}

bits t_map( monad_kind m, const mapping& f, const fin_poset& dom, const fin_poset& cod, const bits& s )
{
    return m == monad_kind::powerset ? p_map( f, cod.size(), s ) : pd_map( f, dom, cod, s );
}

bool is_t_value( monad_kind m, const fin_poset& p, const bits& s )
{
    return s.size() == p.size() && ( m == monad_kind::powerset || is_down_closed( p, s ) );
}

namespace
{

constexpr std::size_t max_materialized_carrier = 4096;

} // namespace

t_object::t_object( monad_kind kind, poset_ptr base ) : _kind{ kind }, _base{ std::move( base ) }
{
    if ( _base->size() > max_t_values )
        throw carrier_too_large( "T X enumeration over " + std::to_string( _base->size() ) + " elements" );
    _elems = kind == monad_kind::powerset ? all_subsets( _base->size() ) : all_down_closed( *_base );
    for ( std::size_t i = 0; i < _elems.size(); ++i )
        _index.emplace( _elems[ i ], i );

    if ( _elems.size() > max_materialized_carrier )
        return;
    std::vector< value > vals;
    vals.reserve( _elems.size() );
    for ( const auto& s : _elems )
    {
        std::vector< value > members;
        for ( auto i = s.find_first(); i != bits::npos; i = s.find_next( i ) )
            members.push_back( _base->at( i ) );
        vals.push_back( value::set( std::move( members ) ) );
    }
    // value::set ordering differs from bitmask ordering; keep T-values in
    // carrier order so that element i of the carrier is _elems[i].
    fin_set carrier( vals );
    std::vector< bits > reordered( _elems.size() );
    for ( std::size_t i = 0; i < vals.size(); ++i )
        reordered[ carrier.index_of( vals[ i ] ) ] = _elems[ i ];
    _elems = std::move( reordered );
    _index.clear();
    for ( std::size_t i = 0; i < _elems.size(); ++i )
        _index.emplace( _elems[ i ], i );

    const auto n = _elems.size();
    std::vector< bits > leq( n, bits( n ) );
    for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = 0; j < n; ++j )
            if ( kind == monad_kind::powerset ? i == j : _elems[ i ].is_subset_of( _elems[ j ] ) )
                leq[ i ].set( j );
    _carrier = fin_poset::from_matrix( std::move( carrier ), leq );
}

std::size_t t_object::index_of( const bits& s ) const
{
    auto it = _index.find( s );
    if ( it == _index.end() )
        throw not_down_closed( "not a T-value: " + subset_str( _base->carrier(), s ) );
    return it->second;
}

monad_instance standard_monad( monad_kind kind )
{
    monad_instance m;
    m.kind = kind;
    m.unit = [ kind ]( const fin_poset& p, std::size_t x ) { return t_unit( kind, p, x ); };
    m.mult = [ kind ]( const fin_poset& p, const std::vector< bits >& fam ) {
        return kind == monad_kind::powerset ? p_mult( p.size(), fam ) : pd_mult( p, fam );
    };
    return m;
}

namespace
{

// Members of a T-value over an enumerated level, as that level's elements.
std::vector< bits > members_of( const std::vector< bits >& level, const bits& s )
{
    std::vector< bits > out;
    for ( auto i = s.find_first(); i != bits::npos; i = s.find_next( i ) )
        out.push_back( level[ i ] );
    return out;
}

// A level of the tower X, T X, T T X: its elements as subsets of the level below,
// with the inclusion order of the monad.
struct level
{
    std::vector< bits > elems;
    std::map< bits, std::size_t > index;
};

level make_level( monad_kind kind, const std::vector< bits >& below )
{
    // Elements of T over `below`, where `below` is ordered by inclusion
    // (downset) or discretely (powerset).
    const auto n = below.size();
    level out;
    for ( auto& s : all_subsets( n ) )
    {
        bool ok = true;
        if ( kind == monad_kind::downset )
        {
            for ( auto i = s.find_first(); i != bits::npos && ok; i = s.find_next( i ) )
                for ( std::size_t j = 0; j < n && ok; ++j )
                    if ( !s[ j ] && below[ j ].is_subset_of( below[ i ] ) )
                        ok = false;
        }
        if ( ok )
        {
            out.index.emplace( s, out.elems.size() );
            out.elems.push_back( std::move( s ) );
        }
    }
    return out;
}

bits unit_on_level( monad_kind kind, const std::vector< bits >& below, std::size_t i )
{
    bits out( below.size() );
    if ( kind == monad_kind::powerset )
    {
        out.set( i );
        return out;
    }
    for ( std::size_t j = 0; j < below.size(); ++j )
        if ( below[ j ].is_subset_of( below[ i ] ) )
            out.set( j );
    return out;
}

std::string show_level( const std::vector< bits >& below, const bits& s, const fin_set& base, int depth )
{
    if ( depth == 0 )
        return subset_str( base, s );
    std::string out = "{";
    bool first = true;
    for ( auto i = s.find_first(); i != bits::npos; i = s.find_next( i ) )
    {
        if ( !first )
            out += ",";
        first = false;
        out += subset_str( base, below[ i ] );
    }
    return out + "}";
}

} // namespace

law_report check_monad_laws( const monad_instance& m, const poset_ptr& carrier )
{
    const auto& x = *carrier;
    if ( m.kind == monad_kind::powerset && x.size() > 4 )
        throw carrier_too_large( "powerset law check is limited to 4 elements" );

    // T X as subsets of X.
    std::vector< bits > tx = m.kind == monad_kind::powerset ? all_subsets( x.size() ) : all_down_closed( x );
    if ( tx.size() > max_t_values )
        throw carrier_too_large( "|T X| = " + std::to_string( tx.size() ) + " exceeds the enumeration bound" );
    std::map< bits, std::size_t > tx_index;
    for ( std::size_t i = 0; i < tx.size(); ++i )
        tx_index.emplace( tx[ i ], i );
    // T T X as subsets of T X.
    const level ttx = make_level( m.kind, tx );

    auto mult_x = [ & ]( const bits& family_over_tx ) { return m.mult( x, members_of( tx, family_over_tx ) ); };

    law_report report;

    auto& left = report.add( "left unit: mult . unit_T = id" );
    for ( std::size_t i = 0; i < tx.size(); ++i )
    {
        const auto lhs = mult_x( unit_on_level( m.kind, tx, i ) );
        record( left, lhs == tx[ i ], [ & ] {
            return "at " + subset_str( x.carrier(), tx[ i ] ) + " got " + subset_str( x.carrier(), lhs );
        } );
    }

    auto& right = report.add( "right unit: mult . T unit = id" );
    for ( std::size_t i = 0; i < tx.size(); ++i )
    {
        // T unit_X applied to tx[i]: the image {unit(x) | x in S}, closed downward in T X.
        bits image( tx.size() );
        const auto& s = tx[ i ];
        for ( auto e = s.find_first(); e != bits::npos; e = s.find_next( e ) )
        {
            auto it = tx_index.find( m.unit( x, e ) );
            if ( it == tx_index.end() )
            {
                record( right, false, [ & ] { return "unit(" + x.at( e ).str() + ") is not a T-value"; } );
                continue;
            }
            image.set( it->second );
        }
        if ( m.kind == monad_kind::downset )
            for ( auto j = image.find_first(); j != bits::npos; j = image.find_next( j ) )
                image |= unit_on_level( m.kind, tx, j );
        const auto lhs = mult_x( image );
        record( right, lhs == s, [ & ] {
            return "at " + subset_str( x.carrier(), s ) + " got " + subset_str( x.carrier(), lhs );
        } );
    }

    const bool full = ttx.elems.size() <= 16;
    auto& assoc = report.add( "associativity: mult . mult_T = mult . T mult",
                              full ? "exhaustive over T T T X" : "exhaustive over unit generators of T T T X" );

    // Elements of T T T X to compare on, as subsets of T T X.
    std::vector< bits > tttx;
    if ( full )
        tttx = make_level( m.kind, ttx.elems ).elems;
    else
        for ( std::size_t i = 0; i < ttx.elems.size(); ++i )
            tttx.push_back( unit_on_level( m.kind, ttx.elems, i ) );

    for ( const auto& big : tttx )
    {
        // mult_{TX}: union of the members (subsets of T X), then mult_X.
        bits flattened( tx.size() );
        std::vector< bits > fam = members_of( ttx.elems, big );
        for ( const auto& f : fam )
            flattened |= f;
        const auto lhs = mult_x( flattened );

        // T mult_X: image of each member under mult_X, closed downward in T X.
        bits image( tx.size() );
        bool bad = false;
        for ( const auto& f : fam )
        {
            auto it = tx_index.find( mult_x( f ) );
            if ( it == tx_index.end() )
            {
                bad = true;
                break;
            }
            image.set( it->second );
        }
        if ( bad )
        {
            record( assoc, false, [] { return "mult leaves T X"; } );
            continue;
        }
        if ( m.kind == monad_kind::downset )
            for ( auto j = image.find_first(); j != bits::npos; j = image.find_next( j ) )
                image |= unit_on_level( m.kind, tx, j );
        const auto rhs = mult_x( image );
        record( assoc, lhs == rhs, [ & ] {
            std::string shown = "{";
            for ( std::size_t i = 0; i < fam.size(); ++i )
                shown += ( i ? "," : "" ) + show_level( tx, fam[ i ], x.carrier(), 1 );
            shown += "}";
            return "at " + shown + ": " + subset_str( x.carrier(), lhs ) + " vs " + subset_str( x.carrier(), rhs );
        } );
    }
    return report;
}

} // namespace ctsem
