#include "ctsem/finite_order.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ctsem
{

value value::atom( std::string name )
{
    return value( kind::atom, std::move( name ), {} );
}

value value::pair( value first, value second )
{
    return value( kind::pair, {}, { std::move( first ), std::move( second ) } );
}

value value::left( value inner )
{
    return value( kind::left, {}, { std::move( inner ) } );
}

value value::right( value inner )
{
    return value( kind::right, {}, { std::move( inner ) } );
}

value value::set( std::vector< value > members )
{
    std::sort( members.begin(), members.end() );
    members.erase( std::unique( members.begin(), members.end() ), members.end() );
    return value( kind::set, {}, std::move( members ) );
}

std::string value::str() const
{
    switch ( _kind )
    {
    case kind::atom:
        return _name;
    case kind::pair:
        return "(" + first().str() + "," + second().str() + ")";
    case kind::left:
        return "inl(" + inner().str() + ")";
    case kind::right:
        return "inr(" + inner().str() + ")";
    case kind::set:
    {
        std::string out = "{";
        for ( std::size_t i = 0; i < _parts.size(); ++i )
        {
            if ( i )
                out += ",";
            out += _parts[ i ].str();
        }
        return out + "}";
    }
    }
    return {};
}

bool operator==( const value& a, const value& b )
{
    return a._kind == b._kind && a._name == b._name && a._parts == b._parts;
}

bool operator<( const value& a, const value& b )
{
    if ( a._kind != b._kind )
        return a._kind < b._kind;
    if ( a._name != b._name )
        return a._name < b._name;
    return std::lexicographical_compare( a._parts.begin(), a._parts.end(),
                                         b._parts.begin(), b._parts.end() );
}

fin_set::fin_set( std::vector< value > elems ) : _elems{ std::move( elems ) }
{
    std::sort( _elems.begin(), _elems.end() );
    for ( std::size_t i = 0; i < _elems.size(); ++i )
    {
        if ( !_index.emplace( _elems[ i ], i ).second )
            throw error( "duplicate element " + _elems[ i ].str() );
    }
}

fin_set fin_set::of_names( const std::vector< std::string >& names )
{
    std::vector< value > elems;
    elems.reserve( names.size() );
    for ( const auto& n : names )
        elems.push_back( value::atom( n ) );
    return fin_set( std::move( elems ) );
}

std::size_t fin_set::index_of( const value& v ) const
{
    auto it = _index.find( v );
    if ( it == _index.end() )
        throw unknown_element( "unknown element " + v.str() );
    return it->second;
}

fin_poset::fin_poset( fin_set carrier, std::vector< bits > up )
    : _carrier{ std::move( carrier ) }, _up{ std::move( up ) }
{
    const auto n = _carrier.size();
    _down.assign( n, bits( n ) );
    for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = 0; j < n; ++j )
            if ( _up[ i ][ j ] )
                _down[ j ].set( i );
}

poset_ptr fin_poset::closure( fin_set carrier, const std::vector< std::pair< std::size_t, std::size_t > >& pairs )
{
    const auto n = carrier.size();
    std::vector< bits > up( n, bits( n ) );
    for ( std::size_t i = 0; i < n; ++i )
        up[ i ].set( i );
    for ( auto [ lo, hi ] : pairs )
    {
        if ( lo >= n || hi >= n )
            throw unknown_element( "order pair outside carrier" );
        up[ lo ].set( hi );
    }
    // Warshall
    for ( std::size_t k = 0; k < n; ++k )
        for ( std::size_t i = 0; i < n; ++i )
            if ( up[ i ][ k ] )
                up[ i ] |= up[ k ];
    for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = i + 1; j < n; ++j )
            if ( up[ i ][ j ] && up[ j ][ i ] )
                throw antisymmetry_violation( "antisymmetry violated: " + carrier.at( i ).str() + " <= "
                                              + carrier.at( j ).str() + " <= " + carrier.at( i ).str() );
    return poset_ptr( new fin_poset( std::move( carrier ), std::move( up ) ) );
}

poset_ptr fin_poset::discrete( fin_set carrier )
{
    return closure( std::move( carrier ), {} );
}

poset_ptr fin_poset::from_matrix( fin_set carrier, const std::vector< bits >& leq )
{
    const auto n = carrier.size();
    if ( leq.size() != n )
        throw carrier_mismatch( "order matrix has wrong size" );
    std::vector< std::pair< std::size_t, std::size_t > > pairs;
    for ( std::size_t i = 0; i < n; ++i )
    {
        if ( leq[ i ].size() != n || !leq[ i ][ i ] )
            throw error( "order matrix is not reflexive" );
        for ( std::size_t j = 0; j < n; ++j )
            if ( leq[ i ][ j ] )
                pairs.emplace_back( i, j );
    }
    auto p = closure( std::move( carrier ), pairs );
    for ( std::size_t i = 0; i < n; ++i )
        if ( p->up_set( i ) != leq[ i ] )
            throw error( "order matrix is not transitive" );
    return p;
}

poset_ptr fin_poset::trusted( fin_set carrier, std::vector< bits > up )
{
    return poset_ptr( new fin_poset( std::move( carrier ), std::move( up ) ) );
}

bool fin_poset::is_discrete() const
{
    for ( std::size_t i = 0; i < size(); ++i )
        if ( _up[ i ].count() != 1 )
            return false;
    return true;
}

std::vector< std::pair< std::size_t, std::size_t > > fin_poset::strict_pairs() const
{
    std::vector< std::pair< std::size_t, std::size_t > > out;
    for ( std::size_t i = 0; i < size(); ++i )
        for ( std::size_t j = 0; j < size(); ++j )
            if ( i != j && _up[ i ][ j ] )
                out.emplace_back( i, j );
    return out;
}

bool same_poset( const poset_ptr& a, const poset_ptr& b )
{
    return a == b || *a == *b;
}

poset_ptr dual( const poset_ptr& p )
{
    std::vector< bits > leq;
    leq.reserve( p->size() );
    for ( std::size_t i = 0; i < p->size(); ++i )
        leq.push_back( p->down_set( i ) );
    return fin_poset::trusted( p->carrier(), std::move( leq ) );
}

poset_ptr product( const poset_ptr& p, const poset_ptr& q )
{
    std::vector< value > elems;
    elems.reserve( p->size() * q->size() );
    for ( const auto& a : p->carrier().elements() )
        for ( const auto& b : q->carrier().elements() )
            elems.push_back( value::pair( a, b ) );
    fin_set carrier( std::move( elems ) );
    const auto n = carrier.size();
    std::vector< bits > leq( n, bits( n ) );
    for ( std::size_t i = 0; i < p->size(); ++i )
        for ( std::size_t j = 0; j < q->size(); ++j )
        {
            auto& row = leq[ product_index( q, i, j ) ];
            const auto& ui = p->up_set( i );
            const auto& uj = q->up_set( j );
            for ( auto i2 = ui.find_first(); i2 != bits::npos; i2 = ui.find_next( i2 ) )
                for ( auto j2 = uj.find_first(); j2 != bits::npos; j2 = uj.find_next( j2 ) )
                    row.set( product_index( q, i2, j2 ) );
        }
    return fin_poset::trusted( std::move( carrier ), std::move( leq ) );
}

poset_ptr coproduct( const poset_ptr& p, const poset_ptr& q )
{
    std::vector< value > elems;
    for ( const auto& a : p->carrier().elements() )
        elems.push_back( value::left( a ) );
    for ( const auto& b : q->carrier().elements() )
        elems.push_back( value::right( b ) );
    fin_set carrier( std::move( elems ) );
    const auto n = carrier.size();
    std::vector< bits > leq( n, bits( n ) );
    for ( std::size_t i = 0; i < p->size(); ++i )
        for ( std::size_t j = 0; j < p->size(); ++j )
            if ( p->leq( i, j ) )
                leq[ i ].set( j );
    const auto off = p->size();
    for ( std::size_t i = 0; i < q->size(); ++i )
        for ( std::size_t j = 0; j < q->size(); ++j )
            if ( q->leq( i, j ) )
                leq[ off + i ].set( off + j );
    return fin_poset::trusted( std::move( carrier ), std::move( leq ) );
}

poset_ptr discrete( const fin_set& s )
{
    return fin_poset::discrete( s );
}

bits down_close( const fin_poset& p, const bits& s )
{
    bits out( p.size() );
    for ( auto i = s.find_first(); i != bits::npos; i = s.find_next( i ) )
        out |= p.down_set( i );
    return out;
}

bits up_close( const fin_poset& p, const bits& s )
{
    bits out( p.size() );
    for ( auto i = s.find_first(); i != bits::npos; i = s.find_next( i ) )
        out |= p.up_set( i );
    return out;
}

bool is_down_closed( const fin_poset& p, const bits& s )
{
    for ( auto i = s.find_first(); i != bits::npos; i = s.find_next( i ) )
        if ( !p.down_set( i ).is_subset_of( s ) )
            return false;
    return true;
}

bool is_up_closed( const fin_poset& p, const bits& s )
{
    for ( auto i = s.find_first(); i != bits::npos; i = s.find_next( i ) )
        if ( !p.up_set( i ).is_subset_of( s ) )
            return false;
    return true;
}

bool is_monotone( const mapping& f, const fin_poset& p, const fin_poset& q )
{
    if ( f.size() != p.size() )
        throw carrier_mismatch( "mapping is not total on its domain" );
    for ( auto [ lo, hi ] : p.strict_pairs() )
        if ( !q.leq( f[ lo ], f[ hi ] ) )
            return false;
    return true;
}

mapping identity_mapping( std::size_t n )
{
    mapping m( n );
    std::iota( m.begin(), m.end(), std::size_t{ 0 } );
    return m;
}

mapping compose( const mapping& g, const mapping& f )
{
    mapping out( f.size() );
    for ( std::size_t i = 0; i < f.size(); ++i )
        out[ i ] = g.at( f[ i ] );
    return out;
}

std::vector< bits > all_subsets( std::size_t n )
{
    if ( n > 20 )
        throw carrier_too_large( "subset enumeration over " + std::to_string( n ) + " elements" );
    std::vector< bits > out;
    out.reserve( std::size_t{ 1 } << n );
    for ( unsigned long mask = 0; mask < ( 1UL << n ); ++mask )
        out.emplace_back( n, mask );
    return out;
}

std::vector< bits > all_down_closed( const fin_poset& p )
{
    std::vector< bits > out;
    for ( auto& s : all_subsets( p.size() ) )
        if ( is_down_closed( p, s ) )
            out.push_back( std::move( s ) );
    return out;
}

std::vector< bits > all_up_closed( const fin_poset& p )
{
    std::vector< bits > out;
    for ( auto& s : all_subsets( p.size() ) )
        if ( is_up_closed( p, s ) )
            out.push_back( std::move( s ) );
    return out;
}

std::vector< mapping > all_mappings( std::size_t m, std::size_t n )
{
    std::vector< mapping > out;
    if ( n == 0 )
    {
        if ( m == 0 )
            out.emplace_back();
        return out;
    }
    mapping cur( m, 0 );
    for ( ;; )
    {
        out.push_back( cur );
        std::size_t i = m;
        while ( i > 0 && ++cur[ i - 1 ] == n )
        {
            cur[ i - 1 ] = 0;
            --i;
        }
        if ( i == 0 )
            return out;
    }
}

std::vector< mapping > all_monotone( const fin_poset& p, const fin_poset& q )
{
    std::vector< mapping > out;
    for ( auto& f : all_mappings( p.size(), q.size() ) )
        if ( is_monotone( f, p, q ) )
            out.push_back( std::move( f ) );
    return out;
}

std::string subset_str( const fin_set& carrier, const bits& s )
{
    std::string out = "{";
    bool first = true;
    for ( auto i = s.find_first(); i != bits::npos; i = s.find_next( i ) )
    {
        if ( !first )
            out += ",";
        first = false;
        out += carrier.at( i ).str();
    }
    return out + "}";
}

namespace
{

using matrix = std::vector< bits >;

matrix permuted( const matrix& m, const std::vector< std::size_t >& perm )
{
    const auto n = m.size();
    matrix out( n, bits( n ) );
    for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = 0; j < n; ++j )
            if ( m[ i ][ j ] )
                out[ perm[ i ] ].set( perm[ j ] );
    return out;
}

std::string matrix_key( const matrix& m )
{
    std::string key;
    for ( const auto& row : m )
        for ( std::size_t j = 0; j < row.size(); ++j )
            key.push_back( row[ j ] ? '1' : '0' );
    return key;
}

} // namespace

std::vector< poset_ptr > posets_up_to_iso( std::size_t n )
{
    if ( n > 5 )
        throw carrier_too_large( "poset enumeration is limited to 5 points" );
    std::vector< std::string > names;
    for ( std::size_t i = 0; i < n; ++i )
        names.push_back( "e" + std::to_string( i ) );
    const auto carrier = fin_set::of_names( names );

    // Candidate strict pairs (i, j), i != j; each is either present or not.
    std::vector< std::pair< std::size_t, std::size_t > > cand;
    for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = 0; j < n; ++j )
            if ( i != j )
                cand.emplace_back( i, j );

    std::vector< std::size_t > perm( n );
    std::iota( perm.begin(), perm.end(), std::size_t{ 0 } );
    std::vector< std::vector< std::size_t > > perms;
    do
        perms.push_back( perm );
    while ( std::next_permutation( perm.begin(), perm.end() ) );

    std::set< std::string > seen;
    std::vector< poset_ptr > out;
    for ( unsigned long mask = 0; mask < ( 1UL << cand.size() ); ++mask )
    {
        matrix m( n, bits( n ) );
        for ( std::size_t i = 0; i < n; ++i )
            m[ i ].set( i );
        bool ok = true;
        for ( std::size_t c = 0; c < cand.size(); ++c )
            if ( mask & ( 1UL << c ) )
            {
                auto [ i, j ] = cand[ c ];
                if ( m[ j ][ i ] )
                {
                    ok = false;
                    break;
                }
                m[ i ].set( j );
            }
        if ( !ok )
            continue;
        // transitive already?
        for ( std::size_t i = 0; i < n && ok; ++i )
            for ( std::size_t j = 0; j < n && ok; ++j )
                if ( m[ i ][ j ] && !m[ j ].is_subset_of( m[ i ] ) )
                    ok = false;
        if ( !ok )
            continue;
        std::string canon;
        for ( const auto& p : perms )
        {
            auto key = matrix_key( permuted( m, p ) );
            if ( canon.empty() || key < canon )
                canon = key;
        }
        if ( seen.insert( canon ).second )
            out.push_back( fin_poset::from_matrix( carrier, m ) );
    }
    return out;
}

poset_ptr chain( const std::vector< std::string >& bottom_first )
{
    auto carrier = fin_set::of_names( bottom_first );
    std::vector< std::pair< std::size_t, std::size_t > > pairs;
    for ( std::size_t i = 0; i + 1 < bottom_first.size(); ++i )
        pairs.emplace_back( carrier.index_of_name( bottom_first[ i ] ),
                            carrier.index_of_name( bottom_first[ i + 1 ] ) );
    return fin_poset::closure( std::move( carrier ), pairs );
}

} // namespace ctsem
