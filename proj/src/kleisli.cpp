#include "ctsem/kleisli.hpp"

#include "kernels.hpp"

#include <array>
#include <functional>

namespace ctsem
{

using detail::mask;

namespace
{

void check_table( backend b, const fin_poset& dom, const fin_poset& cod, const std::vector< bits >& table )
{
    if ( table.size() != dom.size() )
        throw carrier_mismatch( "arrow table has " + std::to_string( table.size() ) + " cells for a domain of "
                                + std::to_string( dom.size() ) );
    for ( const auto& v : table )
        if ( v.size() != cod.size() )
            throw carrier_mismatch( "arrow value over the wrong codomain" );
    if ( b == backend::set )
        return;
    for ( std::size_t x = 0; x < table.size(); ++x )
    {
        if ( !is_down_closed( cod, table[ x ] ) )
            throw not_down_closed( "value at " + dom.at( x ).str() + " is " + subset_str( cod.carrier(), table[ x ] ) );
        const auto& up = dom.up_set( x );
        for ( auto y = up.find_first(); y != bits::npos; y = up.find_next( y ) )
            if ( !table[ x ].is_subset_of( table[ y ] ) )
                throw not_monotone( "arrow value shrinks from " + dom.at( x ).str() + " to " + dom.at( y ).str() );
    }
}

void require_compatible( const kl_arrow& a, const kl_arrow& b )
{
    if ( a.get_backend() != b.get_backend() )
        throw backend_mismatch( "arrows over different backends" );
    if ( !same_poset( a.dom(), b.dom() ) || !same_poset( a.cod(), b.cod() ) )
        throw carrier_mismatch( "arrows with different domain or codomain" );
}

poset_ptr singleton_poset()
{
    static const poset_ptr one = fin_poset::discrete( fin_set::of_names( { "*" } ) );
    return one;
}

// Unit of T at element i of p, as a list of bit indices.
std::vector< std::size_t > unit_bits( backend b, const fin_poset& p, std::size_t i )
{
    if ( b == backend::set )
        return { i };
    std::vector< std::size_t > out;
    detail::for_each_bit( p.down_set( i ), [ & ]( std::size_t j ) { out.push_back( j ); } );
    return out;
}

template < class S >
S unit_value( backend b, const fin_poset& p, std::size_t i, const S& zero )
{
    S out = zero;
    for ( auto j : unit_bits( b, p, i ) )
        detail::set_bit( out, j );
    return out;
}

// Candidate T-values over `cod`.
std::vector< bits > t_values( backend b, const fin_poset& cod )
{
    if ( cod.size() > 20 )
        throw carrier_too_large( "T-values over " + std::to_string( cod.size() ) + " elements" );
    return b == backend::set ? all_subsets( cod.size() ) : all_down_closed( cod );
}

template < class V, class Conv >
std::vector< V > enumerate_tables( backend b, const fin_poset& dom, const fin_poset& cod, std::size_t limit, Conv conv )
{
    using S = typename V::value_type;
    std::vector< S > values;
    for ( const auto& v : t_values( b, cod ) )
        values.push_back( conv( v ) );

    std::vector< V > out;
    const auto n = dom.size();
    V cur( n, S{} );
    // Depth-first over cells in index order; Pos prunes non-monotone prefixes.
    std::function< void( std::size_t ) > go = [ & ]( std::size_t x ) {
        if ( x == n )
        {
            if ( out.size() >= limit )
                throw carrier_too_large( "more than " + std::to_string( limit ) + " Kleisli arrows" );
            out.push_back( cur );
            return;
        }
        for ( const auto& v : values )
        {
            bool ok = true;
            if ( b == backend::pos )
                for ( std::size_t y = 0; y < x && ok; ++y )
                {
                    if ( dom.leq( y, x ) && !detail::is_subset( cur[ y ], v ) )
                        ok = false;
                    if ( dom.leq( x, y ) && !detail::is_subset( v, cur[ y ] ) )
                        ok = false;
                }
            if ( !ok )
                continue;
            cur[ x ] = v;
            go( x + 1 );
        }
    };
    go( 0 );
    return out;
}

template < class V, class S = typename V::value_type >
std::vector< V > generator_tables( backend b, const fin_poset& dom, const fin_poset& cod, const S& zero )
{
    std::vector< V > out;
    for ( std::size_t d = 0; d < dom.size(); ++d )
        for ( std::size_t c = 0; c < cod.size(); ++c )
        {
            V t( dom.size(), zero );
            const auto u = unit_value( b, cod, c, zero );
            for ( std::size_t e = 0; e < dom.size(); ++e )
                if ( b == backend::set ? e == d : dom.leq( d, e ) )
                    t[ e ] = u;
            out.push_back( std::move( t ) );
        }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Kl(T)

kl_arrow::kl_arrow( backend b, poset_ptr dom, poset_ptr cod, std::vector< bits > table )
    : _backend{ b }, _dom{ std::move( dom ) }, _cod{ std::move( cod ) }, _table{ std::move( table ) }
{
    check_table( _backend, *_dom, *_cod, _table );
}

std::string kl_arrow::str() const
{
    std::string out = "[";
    for ( std::size_t x = 0; x < _table.size(); ++x )
    {
        if ( x )
            out += ", ";
        out += _dom->at( x ).str() + " -> " + subset_str( _cod->carrier(), _table[ x ] );
    }
    return out + "]";
}

kl_arrow kl_identity( backend b, const poset_ptr& x )
{
    std::vector< bits > t;
    t.reserve( x->size() );
    for ( std::size_t i = 0; i < x->size(); ++i )
        t.push_back( unit_value( b, *x, i, bits( x->size() ) ) );
    return { b, x, x, std::move( t ) };
}

kl_arrow kl_pure( backend b, const mapping& f, const poset_ptr& dom, const poset_ptr& cod )
{
    if ( f.size() != dom->size() )
        throw carrier_mismatch( "mapping is not total on its domain" );
    if ( b == backend::pos && !is_monotone( f, *dom, *cod ) )
        throw not_monotone( "pure arrow along a non-monotone mapping" );
    std::vector< bits > t;
    t.reserve( f.size() );
    for ( auto y : f )
        t.push_back( unit_value( b, *cod, y, bits( cod->size() ) ) );
    return { b, dom, cod, std::move( t ) };
}

kl_arrow kl_compose( const kl_arrow& g, const kl_arrow& f )
{
    if ( g.get_backend() != f.get_backend() )
        throw backend_mismatch( "composing arrows over different backends" );
    if ( !same_poset( f.cod(), g.dom() ) )
        throw carrier_mismatch( "codomain of the first arrow is not the domain of the second" );
    return { f.get_backend(), f.dom(), g.cod(), detail::compose_cells( g.table(), f.table(), bits( g.cod()->size() ) ) };
}

bool kl_order( const kl_arrow& f, const kl_arrow& g )
{
    require_compatible( f, g );
    for ( std::size_t x = 0; x < f.table().size(); ++x )
        if ( !f( x ).is_subset_of( g( x ) ) )
            return false;
    return true;
}

kl_arrow kl_join( const std::vector< kl_arrow >& arrows )
{
    if ( arrows.empty() )
        throw carrier_mismatch( "join of no arrows has no carriers; use kl_bottom" );
    auto t = arrows.front().table();
    for ( const auto& a : arrows )
    {
        require_compatible( arrows.front(), a );
        for ( std::size_t x = 0; x < t.size(); ++x )
            t[ x ] |= a( x );
    }
    const auto& f = arrows.front();
    return { f.get_backend(), f.dom(), f.cod(), std::move( t ) };
}

kl_arrow kl_bottom( backend b, const poset_ptr& dom, const poset_ptr& cod )
{
    return { b, dom, cod, std::vector< bits >( dom->size(), bits( cod->size() ) ) };
}

kl_arrow kl_copair( const kl_arrow& f, const kl_arrow& g )
{
    if ( f.get_backend() != g.get_backend() )
        throw backend_mismatch( "copairing arrows over different backends" );
    if ( !same_poset( f.cod(), g.cod() ) )
        throw carrier_mismatch( "copairing arrows with different codomains" );
    auto t = f.table();
    t.insert( t.end(), g.table().begin(), g.table().end() );
    return { f.get_backend(), coproduct( f.dom(), g.dom() ), f.cod(), std::move( t ) };
}

std::vector< kl_arrow > all_kl_arrows( backend b, const poset_ptr& dom, const poset_ptr& cod, std::size_t limit )
{
    auto tables = enumerate_tables< std::vector< bits > >( b, *dom, *cod, limit, []( const bits& v ) { return v; } );
    std::vector< kl_arrow > out;
    out.reserve( tables.size() );
    for ( auto& t : tables )
        out.emplace_back( b, dom, cod, std::move( t ) );
    return out;
}

std::vector< kl_arrow > kl_generators( backend b, const poset_ptr& dom, const poset_ptr& cod )
{
    std::vector< kl_arrow > out;
    for ( auto& t : generator_tables< std::vector< bits > >( b, *dom, *cod, bits( cod->size() ) ) )
        out.emplace_back( b, dom, cod, std::move( t ) );
    return out;
}

// ---------------------------------------------------------------------------
// Kl(T . G)

rel_space make_rel_space( const poset_ptr& cond, const poset_ptr& base )
{
    return { cond, base, product( cond, base ) };
}

relkl_arrow::relkl_arrow( rel_space dom, rel_space cod, kl_arrow arrow )
    : _dom{ std::move( dom ) }, _cod{ std::move( cod ) }, _arrow{ std::move( arrow ) }
{
    if ( !same_poset( _dom.cond, _cod.cond ) )
        throw carrier_mismatch( "relative arrow between different condition posets" );
    if ( !same_poset( _arrow.dom(), _dom.g ) || !same_poset( _arrow.cod(), _cod.g ) )
        throw carrier_mismatch( "relative arrow table is not over K x dom -> T(K x cod)" );
}

relkl_arrow relkl_arrow::make( backend b, const rel_space& dom, const rel_space& cod, std::vector< bits > table )
{
    return { dom, cod, kl_arrow( b, dom.g, cod.g, std::move( table ) ) };
}

relkl_arrow relkl_compose( const relkl_arrow& g, const relkl_arrow& f )
{
    if ( !same_poset( f.cond(), g.cond() ) )
        throw carrier_mismatch( "composing relative arrows over different condition posets" );
    return { f.dom(), g.cod(), kl_compose( g.arrow(), f.arrow() ) };
}

relkl_arrow relkl_id( backend b, const rel_space& x )
{
    return { x, x, kl_identity( b, x.g ) };
}

relkl_arrow embed_pure( backend b, const mapping& f, const rel_space& dom, const rel_space& cod )
{
    if ( f.size() != dom.base->size() )
        throw carrier_mismatch( "mapping is not total on its domain" );
    mapping gf( dom.g->size() );
    for ( std::size_t k = 0; k < dom.cond->size(); ++k )
        for ( std::size_t x = 0; x < f.size(); ++x )
            gf[ dom.index( k, x ) ] = cod.index( k, f[ x ] );
    return { dom, cod, kl_pure( b, gf, dom.g, cod.g ) };
}

std::vector< relkl_arrow > all_relkl_arrows( backend b, const rel_space& dom, const rel_space& cod, std::size_t limit )
{
    std::vector< relkl_arrow > out;
    for ( auto& a : all_kl_arrows( b, dom.g, cod.g, limit ) )
        out.emplace_back( dom, cod, std::move( a ) );
    return out;
}

std::vector< relkl_arrow > relkl_generators( backend b, const rel_space& dom, const rel_space& cod )
{
    std::vector< relkl_arrow > out;
    for ( auto& a : kl_generators( b, dom.g, cod.g ) )
        out.emplace_back( dom, cod, std::move( a ) );
    return out;
}

// ---------------------------------------------------------------------------
// Machine functor and its liftings

poset_ptr a_object( const machine_shape& shape, const poset_ptr& x )
{
    return product( discrete( shape.alphabet ), x );
}

poset_ptr b_object( const machine_shape& shape, const poset_ptr& x )
{
    return coproduct( a_object( shape, x ), shape.observations );
}

mapping a_map( const machine_shape& shape, const mapping& f, std::size_t x_size, std::size_t y_size )
{
    mapping out( shape.alphabet.size() * x_size );
    for ( std::size_t a = 0; a < shape.alphabet.size(); ++a )
        for ( std::size_t x = 0; x < x_size; ++x )
            out[ a * x_size + x ] = a * y_size + f.at( x );
    return out;
}

mapping b_map( const machine_shape& shape, const mapping& f, std::size_t x_size, std::size_t y_size )
{
    auto out = a_map( shape, f, x_size, y_size );
    const auto off = shape.alphabet.size() * y_size;
    for ( std::size_t o = 0; o < shape.observations->size(); ++o )
        out.push_back( off + o );
    return out;
}

machine_space make_machine_space( const machine_shape& shape, const poset_ptr& cond, const poset_ptr& x )
{
    auto ax = a_object( shape, x );
    auto bx = coproduct( ax, shape.observations );
    return { shape, make_rel_space( cond, x ), make_rel_space( cond, ax ), make_rel_space( cond, bx ) };
}

namespace detail
{

// Plan for the lifted arrow over G(A X) -> T G(A Y) (with_obs = false) or
// G(B X) -> T G(B Y) (with_obs = true), from an argument G X -> T G Y.
lift_plan machine_plan( backend b, const fin_poset& cond, std::size_t letters, std::size_t xs, std::size_t ys,
                        const fin_poset& obs, bool with_obs )
{
    const auto k_count = cond.size();
    const auto o_count = with_obs ? obs.size() : 0;
    const auto fx = letters * xs + o_count; // |A X| or |B X|
    const auto fy = letters * ys + o_count;
    lift_plan plan;
    plan.cod_size = k_count * fy;
    plan.translations.assign( letters, std::vector< std::size_t >( k_count * ys ) );
    for ( std::size_t a = 0; a < letters; ++a )
        for ( std::size_t k = 0; k < k_count; ++k )
            for ( std::size_t y = 0; y < ys; ++y )
                plan.translations[ a ][ k * ys + y ] = k * fy + a * ys + y;

    const auto cells = k_count * fx;
    plan.source.assign( cells, -1 );
    plan.translation.assign( cells, 0 );
    plan.constants.assign( cells, {} );
    for ( std::size_t k = 0; k < k_count; ++k )
    {
        for ( std::size_t a = 0; a < letters; ++a )
            for ( std::size_t x = 0; x < xs; ++x )
            {
                const auto c = k * fx + a * xs + x;
                plan.source[ c ] = static_cast< std::ptrdiff_t >( k * xs + x );
                plan.translation[ c ] = a;
            }
        for ( std::size_t o = 0; o < o_count; ++o )
        {
            auto& bits_out = plan.constants[ k * fx + letters * xs + o ];
            for ( std::size_t k2 = 0; k2 < k_count; ++k2 )
                for ( std::size_t o2 = 0; o2 < o_count; ++o2 )
                {
                    const bool in = b == backend::set ? ( k2 == k && o2 == o ) : ( cond.leq( k2, k ) && obs.leq( o2, o ) );
                    if ( in )
                        bits_out.push_back( k2 * fy + letters * ys + o2 );
                }
        }
    }
    return plan;
}

} // namespace detail

kl_arrow machine_lift_bar( const machine_shape& shape, const kl_arrow& f )
{
    const auto plan = detail::machine_plan( f.get_backend(), *singleton_poset(), shape.alphabet.size(),
                                            f.dom()->size(), f.cod()->size(), *shape.observations, true );
    return { f.get_backend(), b_object( shape, f.dom() ), b_object( shape, f.cod() ),
             detail::apply_plan( plan, f.table(), bits( plan.cod_size ) ) };
}

relkl_arrow lift_a_tilde( const machine_space& src, const machine_space& dst, const relkl_arrow& f )
{
    const auto plan = detail::machine_plan( f.get_backend(), *f.cond(), src.shape.alphabet.size(),
                                            src.x.base->size(), dst.x.base->size(), *src.shape.observations, false );
    return relkl_arrow::make( f.get_backend(), src.ax, dst.ax,
                              detail::apply_plan( plan, f.arrow().table(), bits( plan.cod_size ) ) );
}

relkl_arrow lift_a_tilde( const machine_shape& shape, const relkl_arrow& f )
{
    return lift_a_tilde( make_machine_space( shape, f.cond(), f.dom().base ),
                         make_machine_space( shape, f.cond(), f.cod().base ), f );
}

relkl_arrow lift_b_hat( const machine_space& src, const machine_space& dst, const relkl_arrow& f )
{
    const auto plan = detail::machine_plan( f.get_backend(), *f.cond(), src.shape.alphabet.size(),
                                            src.x.base->size(), dst.x.base->size(), *src.shape.observations, true );
    return relkl_arrow::make( f.get_backend(), src.bx, dst.bx,
                              detail::apply_plan( plan, f.arrow().table(), bits( plan.cod_size ) ) );
}

relkl_arrow lift_b_hat( const machine_shape& shape, const relkl_arrow& f )
{
    return lift_b_hat( make_machine_space( shape, f.cond(), f.dom().base ),
                       make_machine_space( shape, f.cond(), f.cod().base ), f );
}

// ---------------------------------------------------------------------------
// Law checks. Heavy loops run on 64-bit masks through the same cell kernels
// as the public operations.

namespace
{

// Fixed inline storage: law checks run on domains of at most 16 elements,
// and a table copy is a flat memcpy.
constexpr std::size_t max_cells = 16;

class table
{
    std::array< mask, max_cells > _cells; // entries past _n are unused
    std::uint8_t _n = 0;

public:
    using value_type = mask;

    table() = default;
    table( std::size_t n, mask fill ) : _n{ static_cast< std::uint8_t >( n ) }
    {
        for ( std::size_t i = 0; i < n; ++i )
            _cells[ i ] = fill;
    }

    [[nodiscard]] std::size_t size() const { return _n; }
    mask& operator[]( std::size_t i ) { return _cells[ i ]; }
    mask operator[]( std::size_t i ) const { return _cells[ i ]; }
    void push_back( mask m ) { _cells[ _n++ ] = m; }

    friend bool operator==( const table& a, const table& b )
    {
        if ( a._n != b._n )
            return false;
        for ( std::size_t i = 0; i < a._n; ++i )
            if ( a._cells[ i ] != b._cells[ i ] )
                return false;
        return true;
    }
};

// Above this many compared instances, only the first argument of a law ranges
// over every arrow; the others range over the join-generators and bottom.
constexpr std::size_t instance_budget = std::size_t{ 1 } << 20;
constexpr std::size_t table_limit = std::size_t{ 1 } << 17;

const char* const reduced_scope = "first argument over all arrows, others over join-generators and bottom";

table join( const table& a, const table& b )
{
    table out = a;
    for ( std::size_t i = 0; i < a.size(); ++i )
        out[ i ] |= b[ i ];
    return out;
}

bool leq( const table& a, const table& b )
{
    for ( std::size_t i = 0; i < a.size(); ++i )
        if ( a[ i ] & ~b[ i ] )
            return false;
    return true;
}

table seq( const table& g, const table& f )
{
    return detail::compose_cells( g, f, mask{ 0 } );
}

// Kleisli extension of a fixed arrow g as a lookup table over cell values:
// ext[v] = union of g[y] over y in v. Composing after g is then one lookup per
// cell. Only built for domains of at most max_ext_bits elements.
constexpr std::size_t max_ext_bits = 12;

class extension
{
    std::vector< mask > _lut;

public:
    explicit extension( const table& g ) : _lut( std::size_t{ 1 } << g.size() )
    {
        _lut[ 0 ] = 0;
        for ( std::size_t v = 1; v < _lut.size(); ++v )
            _lut[ v ] = _lut[ v & ( v - 1 ) ] | g[ static_cast< std::size_t >( std::countr_zero( v ) ) ];
    }

    [[nodiscard]] table after( const table& f ) const
    {
        table out( f.size(), 0 );
        for ( std::size_t x = 0; x < f.size(); ++x )
            out[ x ] = _lut[ f[ x ] ];
        return out;
    }
};

std::string show( const fin_poset& dom, const fin_poset& cod, const table& t )
{
    std::string out = "[";
    for ( std::size_t x = 0; x < t.size(); ++x )
    {
        if ( x )
            out += ", ";
        out += dom.at( x ).str() + " -> " + subset_str( cod.carrier(), detail::to_bits( t[ x ], cod.size() ) );
    }
    return out + "]";
}

struct homset
{
    std::vector< table > all;
    std::vector< table > gens; // join-generators followed by bottom
    table bottom;
};

class hom_cache
{
    backend _b;
    std::vector< poset_ptr > _objs;
    std::map< std::pair< std::size_t, std::size_t >, homset > _homs;

public:
    hom_cache( backend b, std::vector< poset_ptr > objs ) : _b{ b }, _objs{ std::move( objs ) }
    {
        for ( const auto& o : _objs )
            if ( o->size() > max_ext_bits )
                throw carrier_too_large( "law checks need carriers of at most 12 elements" );
    }

    [[nodiscard]] std::size_t size() const { return _objs.size(); }
    [[nodiscard]] const fin_poset& obj( std::size_t i ) const { return *_objs[ i ]; }

    const homset& hom( std::size_t i, std::size_t j )
    {
        auto key = std::make_pair( i, j );
        auto it = _homs.find( key );
        if ( it != _homs.end() )
            return it->second;
        homset h;
        h.all = enumerate_tables< table >( _b, *_objs[ i ], *_objs[ j ], table_limit,
                                          []( const bits& v ) { return detail::to_mask( v ); } );
        h.gens = generator_tables< table >( _b, *_objs[ i ], *_objs[ j ], mask{ 0 } );
        h.bottom = table( _objs[ i ]->size(), 0 );
        h.gens.push_back( h.bottom );
        return _homs.emplace( key, std::move( h ) ).first->second;
    }

    table identity( std::size_t i ) const
    {
        table t;
        for ( std::size_t x = 0; x < _objs[ i ]->size(); ++x )
            t.push_back( unit_value( _b, *_objs[ i ], x, mask{ 0 } ) );
        return t;
    }

    std::string show( std::size_t i, std::size_t j, const table& t ) const
    {
        return ctsem::show( *_objs[ i ], *_objs[ j ], t );
    }
};

// Chooses, for each argument position after the first, the full homset or
// its generators, keeping the instance count within budget when possible.
struct pools
{
    std::vector< const std::vector< table >* > sets;
    bool exhaustive = true;
};

pools choose( const std::vector< const homset* >& homs )
{
    pools p;
    std::size_t count = homs.front()->all.size();
    p.sets.push_back( &homs.front()->all );
    for ( std::size_t i = 1; i < homs.size(); ++i )
    {
        const auto n = homs[ i ]->all.size();
        if ( count <= instance_budget / std::max< std::size_t >( n, 1 ) )
        {
            count *= n;
            p.sets.push_back( &homs[ i ]->all );
        }
        else
        {
            count *= homs[ i ]->gens.size();
            p.sets.push_back( &homs[ i ]->gens );
            p.exhaustive = false;
        }
    }
    return p;
}

void note_scope( law_result& r, bool exhaustive )
{
    if ( !exhaustive )
        r.scope = reduced_scope;
}

// Ascending 3-chains of a homset: every one when few, else (bottom, f, f v c).
std::vector< std::array< const table*, 3 > > chains( const homset& h, std::vector< table >& storage, bool& exhaustive )
{
    std::vector< std::array< const table*, 3 > > out;
    const auto n = h.all.size();
    if ( n * n * n <= instance_budget / 64 )
    {
        for ( const auto& a : h.all )
            for ( const auto& b : h.all )
                if ( leq( a, b ) )
                    for ( const auto& c : h.all )
                        if ( leq( b, c ) )
                            out.push_back( { &a, &b, &c } );
        return out;
    }
    exhaustive = false;
    storage.reserve( n * h.gens.size() );
    for ( const auto& f : h.all )
        for ( const auto& c : h.gens )
        {
            storage.push_back( join( f, c ) );
            out.push_back( { &h.bottom, &f, &storage.back() } );
        }
    return out;
}

// Monotonicity, binary joins and chain continuity in one argument of
// composition. Each instance compares against g . (f v c) (or (g v c) . f),
// computed once and shared by the three laws. Every comparable pair f <= f'
// is linked by steps f <= f v c with c a generator, so stepping from every f
// covers the whole order.
void order_laws( hom_cache& cat, std::size_t x, std::size_t y, std::size_t z, bool vary_right, law_result& mono,
                 law_result& joins, law_result& cont, bool chains_done )
{
    // The varying homset, the fixed one, and a composition in the right order.
    const auto& var = vary_right ? cat.hom( x, y ) : cat.hom( y, z );
    const auto& fixed = vary_right ? cat.hom( y, z ) : cat.hom( x, y );
    auto show_var = [ & ]( const table& t ) { return vary_right ? cat.show( x, y, t ) : cat.show( y, z, t ); };
    auto show_fixed = [ & ]( const table& t ) { return vary_right ? cat.show( y, z, t ) : cat.show( x, y, t ); };

    auto p = choose( { &var, &var, &fixed } );
    note_scope( mono, p.exhaustive );
    note_scope( joins, p.exhaustive );
    if ( !chains_done )
        note_scope( cont, false );

    std::vector< table > vw( var.all.size() );
    for ( const auto& w : *p.sets[ 2 ] )
    {
        // With the fixed arrow on the left, compose through its extension.
        const extension wext( w );
        auto apply = [ & ]( const table& v, const table& fixed ) {
            return vary_right ? wext.after( v ) : seq( v, fixed );
        };
        for ( std::size_t i = 0; i < var.all.size(); ++i )
            vw[ i ] = apply( var.all[ i ], w );
        const auto bw = apply( var.bottom, w );
        for ( const auto& c : *p.sets[ 1 ] )
        {
            const auto cw = apply( c, w );
            for ( std::size_t i = 0; i < var.all.size(); ++i )
            {
                const auto vc = join( var.all[ i ], c );
                const auto vcw = apply( vc, w );
                auto witness = [ & ] {
                    return "v = " + show_var( var.all[ i ] ) + ", c = " + show_var( c ) + ", fixed " + show_fixed( w );
                };
                record( mono, leq( vw[ i ], vcw ), witness );
                record( joins, vcw == join( vw[ i ], cw ), witness );
                if ( !chains_done )
                    record( cont, vcw == join( join( bw, vw[ i ] ), vcw ), witness );
            }
        }
    }
}

void kleisli_laws( hom_cache& cat, law_report& rep )
{
    const auto n = cat.size();
    auto& left_id = rep.add( "left identity: id . f = f" );
    auto& right_id = rep.add( "right identity: f . id = f" );
    auto& assoc = rep.add( "associativity: h . (g . f) = (h . g) . f" );
    auto& strict = rep.add( "left strictness: bottom . f = bottom" );
    auto& mono = rep.add( "composition is monotone in both arguments" );
    auto& joins = rep.add( "composition preserves binary joins in both arguments" );
    auto& cont = rep.add( "composition is continuous on ascending chains" );

    for ( std::size_t x = 0; x < n; ++x )
        for ( std::size_t y = 0; y < n; ++y )
        {
            const auto& fxy = cat.hom( x, y );
            const auto idx = cat.identity( x );
            const auto idy = cat.identity( y );
            for ( const auto& f : fxy.all )
            {
                record( left_id, seq( idy, f ) == f, [ & ] { return "f = " + cat.show( x, y, f ); } );
                record( right_id, seq( f, idx ) == f, [ & ] { return "f = " + cat.show( x, y, f ); } );
            }
            for ( std::size_t z = 0; z < n; ++z )
            {
                const auto& gyz = cat.hom( y, z );
                const table bottom_xz( cat.obj( x ).size(), 0 );
                for ( const auto& f : fxy.all )
                    record( strict, seq( gyz.bottom, f ) == bottom_xz, [ & ] { return "f = " + cat.show( x, y, f ); } );

                // Every ascending 3-chain when the homsets are small.
                bool fex = true, gex = true;
                std::vector< table > storage;
                const auto fchains = chains( fxy, storage, fex );
                const auto gchains = chains( gyz, storage, gex );
                if ( fex )
                    for ( const auto& ch : fchains )
                        for ( const auto& g : gyz.all )
                        {
                            const auto rhs = join( join( seq( g, *ch[ 0 ] ), seq( g, *ch[ 1 ] ) ), seq( g, *ch[ 2 ] ) );
                            record( cont, seq( g, *ch[ 2 ] ) == rhs, [ & ] {
                                return "chain ending at " + cat.show( x, y, *ch[ 2 ] ) + ", g = " + cat.show( y, z, g );
                            } );
                        }
                if ( gex )
                    for ( const auto& ch : gchains )
                        for ( const auto& f : fxy.all )
                        {
                            const auto rhs = join( join( seq( *ch[ 0 ], f ), seq( *ch[ 1 ], f ) ), seq( *ch[ 2 ], f ) );
                            record( cont, seq( *ch[ 2 ], f ) == rhs, [ & ] {
                                return "chain ending at " + cat.show( y, z, *ch[ 2 ] ) + ", f = " + cat.show( x, y, f );
                            } );
                        }
                order_laws( cat, x, y, z, true, mono, joins, cont, fex );
                order_laws( cat, x, y, z, false, mono, joins, cont, gex );

                for ( std::size_t w = 0; w < n; ++w )
                {
                    const auto& hzw = cat.hom( z, w );
                    auto p = choose( { &fxy, &gyz, &hzw } );
                    note_scope( assoc, p.exhaustive );
                    std::vector< table > gf( fxy.all.size() );
                    for ( const auto& g : *p.sets[ 1 ] )
                    {
                        const extension gext( g );
                        for ( std::size_t i = 0; i < fxy.all.size(); ++i )
                            gf[ i ] = gext.after( fxy.all[ i ] );
                        for ( const auto& h : *p.sets[ 2 ] )
                        {
                            const extension hext( h );
                            const extension hgext( seq( h, g ) );
                            for ( std::size_t i = 0; i < fxy.all.size(); ++i )
                                record( assoc, hext.after( gf[ i ] ) == hgext.after( fxy.all[ i ] ), [ & ] {
                                    return "f = " + cat.show( x, y, fxy.all[ i ] ) + ", g = " + cat.show( y, z, g )
                                           + ", h = " + cat.show( z, w, h );
                                } );
                        }
                    }
                }
            }
        }
}

} // namespace

law_report check_kleisli_laws( backend b, const std::vector< poset_ptr >& carriers )
{
    hom_cache cat( b, carriers );
    law_report rep;
    kleisli_laws( cat, rep );
    return rep;
}

law_report check_relkl_laws( backend b, const poset_ptr& cond, const std::vector< poset_ptr >& carriers )
{
    std::vector< rel_space > spaces;
    std::vector< poset_ptr > gs;
    for ( const auto& c : carriers )
    {
        spaces.push_back( make_rel_space( cond, c ) );
        gs.push_back( spaces.back().g );
    }
    hom_cache cat( b, gs );
    law_report rep;
    kleisli_laws( cat, rep );

    // The unit of the relative monad and the embedding of plain mappings.
    auto& unit = rep.add( "identity is the unit at (k, x)" );
    auto& l_id = rep.add( "embedding preserves identities" );
    auto& l_comp = rep.add( "embedding preserves composition" );
    for ( std::size_t i = 0; i < spaces.size(); ++i )
    {
        const auto id = relkl_id( b, spaces[ i ] );
        const auto expect = cat.identity( i );
        for ( std::size_t c = 0; c < expect.size(); ++c )
            record( unit, detail::to_mask( id.arrow()( c ) ) == expect[ c ],
                    [ & ] { return "at " + spaces[ i ].g->at( c ).str(); } );
        record( l_id, embed_pure( b, identity_mapping( carriers[ i ]->size() ), spaces[ i ], spaces[ i ] ) == id,
                [ & ] { return "on " + spaces[ i ].g->carrier().at( 0 ).str(); } );
    }
    for ( std::size_t i = 0; i < spaces.size(); ++i )
        for ( std::size_t j = 0; j < spaces.size(); ++j )
            for ( std::size_t k = 0; k < spaces.size(); ++k )
            {
                const auto fs = b == backend::pos ? all_monotone( *carriers[ i ], *carriers[ j ] )
                                                  : all_mappings( carriers[ i ]->size(), carriers[ j ]->size() );
                const auto gs2 = b == backend::pos ? all_monotone( *carriers[ j ], *carriers[ k ] )
                                                   : all_mappings( carriers[ j ]->size(), carriers[ k ]->size() );
                for ( const auto& f : fs )
                    for ( const auto& g : gs2 )
                    {
                        const auto lhs = embed_pure( b, ctsem::compose( g, f ), spaces[ i ], spaces[ k ] );
                        const auto rhs = relkl_compose( embed_pure( b, g, spaces[ j ], spaces[ k ] ),
                                                        embed_pure( b, f, spaces[ i ], spaces[ j ] ) );
                        record( l_comp, lhs == rhs, [ & ] { return "L(g . f) = " + lhs.str() + " vs " + rhs.str(); } );
                    }
            }
    return rep;
}

law_report check_lifting_theorems( backend b, const machine_shape& shape, const poset_ptr& cond,
                                   const std::vector< poset_ptr >& carriers )
{
    std::vector< machine_space > ms;
    std::vector< poset_ptr > gx;
    for ( const auto& c : carriers )
    {
        ms.push_back( make_machine_space( shape, cond, c ) );
        gx.push_back( ms.back().x.g );
        if ( ms.back().bx.g->size() > max_ext_bits )
            throw carrier_too_large( "lifting checks need |K x B X| <= 12" );
    }
    hom_cache cat( b, gx );
    const auto n = carriers.size();
    const auto letters = shape.alphabet.size();
    law_report rep;

    for ( const bool with_obs : { true, false } )
    {
        const std::string name = with_obs ? "B-hat" : "A-tilde";
        auto lifted_obj = [ & ]( std::size_t i ) -> const fin_poset& { return with_obs ? *ms[ i ].bx.g : *ms[ i ].ax.g; };
        std::map< std::pair< std::size_t, std::size_t >, detail::lift_plan > plans;
        auto plan = [ & ]( std::size_t i, std::size_t j ) -> const detail::lift_plan& {
            auto key = std::make_pair( i, j );
            auto it = plans.find( key );
            if ( it == plans.end() )
                it = plans
                         .emplace( key, detail::machine_plan( b, *cond, letters, carriers[ i ]->size(),
                                                              carriers[ j ]->size(), *shape.observations, with_obs ) )
                         .first;
            return it->second;
        };
        auto lift = [ & ]( std::size_t i, std::size_t j, const table& f ) {
            return detail::apply_plan( plan( i, j ), f, mask{ 0 } );
        };
        auto show_lifted = [ & ]( std::size_t i, std::size_t j, const table& t ) {
            return ctsem::show( lifted_obj( i ), lifted_obj( j ), t );
        };

        auto& ids = rep.add( name + " preserves identities" );
        auto& comp = rep.add( name + " preserves composition" );
        auto& pure = rep.add( name + " agrees with the functor on pure arrows" );
        auto& mono = rep.add( name + " is monotone" );
        auto& joins = rep.add( name + " preserves binary joins" );
        auto& cont = rep.add( name + " is continuous on ascending chains" );

        for ( std::size_t i = 0; i < n; ++i )
        {
            table id_lifted;
            for ( std::size_t c = 0; c < lifted_obj( i ).size(); ++c )
                id_lifted.push_back( unit_value( b, lifted_obj( i ), c, mask{ 0 } ) );
            const auto got = lift( i, i, cat.identity( i ) );
            record( ids, got == id_lifted, [ & ] { return "on " + carriers[ i ]->carrier().at( 0 ).str() + ": " + show_lifted( i, i, got ); } );
        }

        for ( std::size_t i = 0; i < n; ++i )
            for ( std::size_t j = 0; j < n; ++j )
            {
                const auto& fij = cat.hom( i, j );
                std::vector< table > lifted_all;
                lifted_all.reserve( fij.all.size() );
                for ( const auto& f : fij.all )
                    lifted_all.push_back( lift( i, j, f ) );

                // Pure arrows: lift (L h) = L (F h).
                const auto hs = b == backend::pos ? all_monotone( *carriers[ i ], *carriers[ j ] )
                                                  : all_mappings( carriers[ i ]->size(), carriers[ j ]->size() );
                const auto xs = carriers[ i ]->size();
                const auto ys = carriers[ j ]->size();
                for ( const auto& h : hs )
                {
                    table lh;
                    for ( std::size_t k = 0; k < cond->size(); ++k )
                        for ( std::size_t x = 0; x < xs; ++x )
                            lh.push_back( unit_value( b, *ms[ j ].x.g, ms[ j ].x.index( k, h[ x ] ), mask{ 0 } ) );
                    const auto fh = with_obs ? b_map( shape, h, xs, ys ) : a_map( shape, h, xs, ys );
                    const auto fys = fh.size() == 0 ? 0 : lifted_obj( j ).size() / cond->size();
                    const auto fxs = lifted_obj( i ).size() / cond->size();
                    table lfh;
                    for ( std::size_t k = 0; k < cond->size(); ++k )
                        for ( std::size_t e = 0; e < fxs; ++e )
                            lfh.push_back( unit_value( b, lifted_obj( j ), k * fys + fh[ e ], mask{ 0 } ) );
                    const auto got = lift( i, j, lh );
                    record( pure, got == lfh, [ & ] { return "h = " + show( *carriers[ i ], *carriers[ j ], [ & ] {
                                                            table t;
                                                            for ( auto y : h )
                                                                t.push_back( mask{ 1 } << y );
                                                            return t;
                                                        }() ) + ": " + show_lifted( i, j, got ); } );
                }

                // lift (f v c) is shared by the monotonicity, join and chain laws.
                {
                    bool exhaustive = true;
                    std::vector< table > storage;
                    const auto fchains = chains( fij, storage, exhaustive );
                    if ( exhaustive )
                        for ( const auto& ch : fchains )
                        {
                            const auto top = lift( i, j, *ch[ 2 ] );
                            const auto rhs = join( join( lift( i, j, *ch[ 0 ] ), lift( i, j, *ch[ 1 ] ) ), top );
                            record( cont, top == rhs, [ & ] { return "chain ending at " + cat.show( i, j, *ch[ 2 ] ); } );
                        }
                    else
                        note_scope( cont, false );

                    auto p = choose( { &fij, &fij } );
                    note_scope( mono, p.exhaustive );
                    note_scope( joins, p.exhaustive );
                    const auto lbottom = lift( i, j, fij.bottom );
                    for ( const auto& c : *p.sets[ 1 ] )
                    {
                        const auto lc = lift( i, j, c );
                        for ( std::size_t f_i = 0; f_i < fij.all.size(); ++f_i )
                        {
                            const auto& f = fij.all[ f_i ];
                            const auto lfc = lift( i, j, join( f, c ) );
                            auto witness = [ & ] { return "f = " + cat.show( i, j, f ) + ", c = " + cat.show( i, j, c ); };
                            record( mono, leq( lifted_all[ f_i ], lfc ), witness );
                            record( joins, lfc == join( lifted_all[ f_i ], lc ), witness );
                            if ( !exhaustive )
                                record( cont, lfc == join( join( lbottom, lifted_all[ f_i ] ), lfc ), witness );
                        }
                    }
                }

                for ( std::size_t k = 0; k < n; ++k )
                {
                    const auto& gjk = cat.hom( j, k );
                    auto p = choose( { &fij, &gjk } );
                    note_scope( comp, p.exhaustive );
                    for ( const auto& g : *p.sets[ 1 ] )
                    {
                        const extension gext( g );
                        const extension lgext( lift( j, k, g ) );
                        for ( std::size_t f_i = 0; f_i < fij.all.size(); ++f_i )
                        {
                            const auto& f = fij.all[ f_i ];
                            const auto lhs = lift( i, k, gext.after( f ) );
                            const auto rhs = lgext.after( lifted_all[ f_i ] );
                            record( comp, lhs == rhs, [ & ] {
                                return "f = " + cat.show( i, j, f ) + ", g = " + cat.show( j, k, g ) + ": "
                                       + show_lifted( i, k, lhs ) + " vs " + show_lifted( i, k, rhs );
                            } );
                        }
                    }
                }
            }
    }

    // Copairing in Kl(T) exchanges with joins: [f v f', g v g'] = [f, g] v [f', g'].
    // Checked on the plain carriers, where copairing is defined.
    auto& exch = rep.add( "copairing exchanges with binary joins" );
    for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = 0; j < n; ++j )
            for ( std::size_t k = 0; k < n; ++k )
            {
                // Plain carriers; the right summand's arrows range over generators
                // and bottom once the left homset is large.
                auto gens = [ & ]( std::size_t d, std::size_t c ) {
                    auto out = kl_generators( b, carriers[ d ], carriers[ c ] );
                    out.push_back( kl_bottom( b, carriers[ d ], carriers[ c ] ) );
                    return out;
                };
                const auto fs = all_kl_arrows( b, carriers[ i ], carriers[ k ] );
                auto gs = all_kl_arrows( b, carriers[ j ], carriers[ k ] );
                if ( fs.size() * fs.size() * gs.size() * gs.size() > ( std::size_t{ 1 } << 14 ) )
                {
                    gs = gens( j, k );
                    exch.scope = "left arrows over all arrows, right arrows over join-generators and bottom";
                }
                for ( const auto& f : fs )
                    for ( const auto& f2 : fs )
                        for ( const auto& g : gs )
                            for ( const auto& g2 : gs )
                            {
                                const auto lhs = kl_copair( kl_join( { f, f2 } ), kl_join( { g, g2 } ) );
                                const auto rhs = kl_join( { kl_copair( f, g ), kl_copair( f2, g2 ) } );
                                record( exch, lhs == rhs, [ & ] { return lhs.str() + " vs " + rhs.str(); } );
                            }
            }
    return rep;
}

} // namespace ctsem
