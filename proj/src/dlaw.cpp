#include "ctsem/dlaw.hpp"

#include <map>
#include <sstream>

namespace ctsem
{

namespace
{

std::string mapping_str( const mapping& f )
{
    std::ostringstream os;
    os << '[';
    for ( std::size_t i = 0; i < f.size(); ++i )
        os << ( i ? " " : "" ) << f[ i ];
    os << ']';
    return os.str();
}

void require_total( const mapping& f, const fin_poset& dom, const fin_poset& cod )
{
    if ( f.size() != dom.size() )
        throw carrier_mismatch( "mapping has " + std::to_string( f.size() ) + " entries over a carrier of "
                                + std::to_string( dom.size() ) );
    for ( auto v : f )
        if ( v >= cod.size() )
            throw carrier_mismatch( "mapping leaves its codomain" );
}

void require_monotone( backend b, const mapping& f, const fin_poset& dom, const fin_poset& cod )
{
    require_total( f, dom, cod );
    if ( b == backend::pos && !is_monotone( f, dom, cod ) )
        throw not_monotone( "mapping " + mapping_str( f ) + " is not monotone" );
}

// Every mapping of the backend between two carriers.
std::vector< mapping > arrows_between( backend b, const poset_ptr& x, const poset_ptr& y )
{
    return b == backend::set ? all_mappings( x->size(), y->size() ) : all_monotone( *x, *y );
}

std::vector< bits > all_predicates( backend b, const fin_poset& p )
{
    return b == backend::set ? all_subsets( p.size() ) : all_up_closed( p );
}

// x |-> index of T f (x) in T Y
mapping t_arrow( const t_object& tx, const t_object& ty, const mapping& f )
{
    mapping out( tx.size() );
    for ( std::size_t i = 0; i < tx.size(); ++i )
        out[ i ] = ty.index_of( t_map( tx.kind(), f, *tx.base(), *ty.base(), tx.at( i ) ) );
    return out;
}

const poset_ptr& materialized( const t_object& t )
{
    if ( !t.carrier() )
        throw carrier_too_large( "T X has " + std::to_string( t.size() ) + " elements" );
    return t.carrier();
}

} // namespace

predicate::predicate( backend b, poset_ptr carrier, bits members )
    : _backend{ b }, _carrier{ std::move( carrier ) }, _members{ std::move( members ) }
{
    if ( _members.size() != _carrier->size() )
        throw carrier_mismatch( "predicate over a carrier of a different size" );
    if ( b == backend::pos && !is_up_closed( *_carrier, _members ) )
        throw closure_violation( "predicate " + str() + " is not up-closed" );
}

poset_ptr involution( backend b, const poset_ptr& y )
{
    return b == backend::set ? y : dual( y );
}

relation::relation( backend b, poset_ptr left, poset_ptr right, bits members )
    : _backend{ b }, _left{ std::move( left ) }, _right{ std::move( right ) }, _members{ std::move( members ) }
{
    _pairs = product( _left, involution( b, _right ) );
    if ( _members.size() != _pairs->size() )
        throw carrier_mismatch( "relation over carriers of a different size" );
    if ( b == backend::pos && !is_up_closed( *_pairs, _members ) )
        throw closure_violation( "relation " + str() + " is not up-closed on the left and down-closed on the right" );
}

std::string relation::str() const
{
    return subset_str( _pairs->carrier(), _members );
}

relation theta( const kl_arrow& f )
{
    const auto ys = f.cod()->size();
    bits m( f.dom()->size() * ys );
    for ( std::size_t x = 0; x < f.dom()->size(); ++x )
        for ( auto y = f( x ).find_first(); y != bits::npos; y = f( x ).find_next( y ) )
            m.set( x * ys + y );
    return { f.get_backend(), f.dom(), f.cod(), std::move( m ) };
}

kl_arrow theta_inv( const relation& r )
{
    const auto xs = r.left()->size();
    const auto ys = r.right()->size();
    std::vector< bits > table( xs, bits( ys ) );
    for ( std::size_t x = 0; x < xs; ++x )
        for ( std::size_t y = 0; y < ys; ++y )
            if ( r.contains( x, y ) )
                table[ x ].set( y );
    try
    {
        return { r.get_backend(), r.left(), r.right(), std::move( table ) };
    }
    catch ( const not_down_closed& e )
    {
        throw closure_violation( e.what() );
    }
    catch ( const not_monotone& e )
    {
        throw closure_violation( e.what() );
    }
}

predicate reindex( const mapping& f, const poset_ptr& dom, const predicate& p )
{
    require_monotone( p.get_backend(), f, *dom, *p.carrier() );
    bits m( dom->size() );
    for ( std::size_t x = 0; x < f.size(); ++x )
        if ( p.members()[ f[ x ] ] )
            m.set( x );
    return { p.get_backend(), dom, std::move( m ) };
}

predicate direct_image( const mapping& f, const predicate& p, const poset_ptr& cod )
{
    require_monotone( p.get_backend(), f, *p.carrier(), *cod );
    bits m( cod->size() );
    for ( auto x = p.members().find_first(); x != bits::npos; x = p.members().find_next( x ) )
        m.set( f[ x ] );
    if ( p.get_backend() == backend::pos )
        m = up_close( *cod, m );
    return { p.get_backend(), cod, std::move( m ) };
}

relation membership( backend b, const poset_ptr& x )
{
    t_object tx( monad_of( b ), x );
    return theta( kl_arrow( b, materialized( tx ), x, tx.elements() ) );
}

relation delta( backend b, const poset_ptr& x )
{
    return theta( kl_identity( b, x ) );
}

relation rel_compose( const relation& s, const relation& r )
{
    return theta( kl_compose( theta_inv( s ), theta_inv( r ) ) );
}

relation relational_compose( const relation& s, const relation& r )
{
    if ( s.get_backend() != r.get_backend() )
        throw backend_mismatch( "composing relations of different backends" );
    if ( !same_poset( r.right(), s.left() ) )
        throw carrier_mismatch( "relations do not meet in a common carrier" );
    const auto xs = r.left()->size();
    const auto ys = r.right()->size();
    const auto zs = s.right()->size();
    bits m( xs * zs );
    for ( std::size_t x = 0; x < xs; ++x )
        for ( std::size_t y = 0; y < ys; ++y )
            if ( r.contains( x, y ) )
                for ( std::size_t z = 0; z < zs; ++z )
                    if ( s.contains( y, z ) )
                        m.set( x * zs + z );
    return { r.get_backend(), r.left(), s.right(), std::move( m ) };
}

poset_ptr finite_functor::on_obj( const poset_ptr& x ) const
{
    switch ( kind )
    {
    case functor_kind::a: return a_object( shape, x );
    case functor_kind::b: return b_object( shape, x );
    default: return x;
    }
}

mapping finite_functor::on_arr( const mapping& f, std::size_t x_size, std::size_t y_size ) const
{
    switch ( kind )
    {
    case functor_kind::a: return a_map( shape, f, x_size, y_size );
    case functor_kind::b: return b_map( shape, f, x_size, y_size );
    default: return f;
    }
}

std::size_t finite_functor::obj_size( std::size_t x_size ) const
{
    switch ( kind )
    {
    case functor_kind::a: return shape.alphabet.size() * x_size;
    case functor_kind::b: return shape.alphabet.size() * x_size + shape.observations->size();
    default: return x_size;
    }
}

std::string finite_functor::name() const
{
    switch ( kind )
    {
    case functor_kind::a: return "A";
    case functor_kind::b: return "B";
    default: return "Id";
    }
}

finite_functor identity_functor()
{
    return { functor_kind::identity, { fin_set{}, discrete( fin_set{} ) } };
}

finite_functor a_functor( const fin_set& alphabet )
{
    return { functor_kind::a, { alphabet, discrete( fin_set{} ) } };
}

finite_functor b_functor( const fin_set& alphabet, const poset_ptr& observations )
{
    return { functor_kind::b, { alphabet, observations } };
}

mapping lambda_map( const finite_functor& f, std::size_t x_size, std::size_t y_size )
{
    const auto n = x_size * y_size;
    mapping pr1( n ), pr2( n );
    for ( std::size_t i = 0; i < n; ++i )
    {
        pr1[ i ] = i / y_size;
        pr2[ i ] = i % y_size;
    }
    const auto f1 = f.on_arr( pr1, n, x_size );
    const auto f2 = f.on_arr( pr2, n, y_size );
    const auto fy = f.obj_size( y_size );
    mapping out( f1.size() );
    for ( std::size_t e = 0; e < out.size(); ++e )
        out[ e ] = f1[ e ] * fy + f2[ e ];
    return out;
}

predicate_lifting standard_predicate_lifting()
{
    return { "standard", []( const finite_functor& f, const predicate& p ) {
                const auto xs = p.carrier()->size();
                auto fx = f.on_obj( p.carrier() );
                if ( f.kind == functor_kind::identity )
                    return predicate( p.get_backend(), fx, p.members() );
                bits m( fx->size() );
                for ( std::size_t a = 0; a < f.shape.alphabet.size(); ++a )
                    for ( auto x = p.members().find_first(); x != bits::npos; x = p.members().find_next( x ) )
                        m.set( a * xs + x );
                for ( auto i = f.shape.alphabet.size() * xs; i < m.size(); ++i )
                    m.set( i );
                return predicate( p.get_backend(), fx, std::move( m ) );
            } };
}

relation relation_lift( const predicate_lifting& sigma, const finite_functor& f, const relation& r )
{
    const auto b = r.get_backend();
    const auto xs = r.left()->size();
    const auto ys = r.right()->size();
    auto lifted = sigma.apply( f, r.as_predicate() );
    if ( lifted.carrier()->size() != f.obj_size( xs * ys ) )
        throw carrier_mismatch( "predicate lifting '" + sigma.name + "' left F(X x I Y)" );

    auto fx = f.on_obj( r.left() );
    auto fy = f.on_obj( r.right() );
    auto fiy = f.on_obj( involution( b, r.right() ) );
    if ( !same_poset( fiy, involution( b, fy ) ) )
        throw carrier_mismatch( f.name() + " does not commute with the involution on " + subset_str( r.right()->carrier(), r.right()->full_subset() ) );

    auto img = direct_image( lambda_map( f, xs, ys ), lifted, product( fx, fiy ) );
    return { b, fx, fy, img.members() };
}

relation_lifting make_relation_lifting( const predicate_lifting& sigma, const finite_functor& f )
{
    return [ sigma, f ]( const relation& r ) { return relation_lift( sigma, f, r ); };
}

kl_arrow build_dlaw( const relation_lifting& lift, backend b, const poset_ptr& x )
{
    return theta_inv( lift( membership( b, x ) ) );
}

law_report check_kl_law( const dlaw_family& vartheta, const finite_functor& f, backend b,
                         const std::vector< poset_ptr >& carriers )
{
    const auto kind = monad_of( b );
    struct component
    {
        poset_ptr x;
        t_object tx;
        kl_arrow theta;
    };
    std::vector< component > cs;
    for ( const auto& x : carriers )
    {
        t_object tx( kind, x );
        auto th = vartheta( x );
        if ( th.dom()->size() != f.obj_size( tx.size() ) || th.cod()->size() != f.obj_size( x->size() ) )
            throw carrier_mismatch( "distributive law component is not of type F T X -> T F X" );
        cs.push_back( { x, std::move( tx ), std::move( th ) } );
    }

    law_report rep;
    auto& nat = rep.add( "naturality: vartheta . F T f = T F f . vartheta",
                         b == backend::set ? "every mapping between the carriers"
                                           : "every monotone mapping between the carriers" );
    for ( const auto& cx : cs )
        for ( const auto& cy : cs )
            for ( const auto& m : arrows_between( b, cx.x, cy.x ) )
            {
                const auto ftf = f.on_arr( t_arrow( cx.tx, cy.tx, m ), cx.tx.size(), cy.tx.size() );
                const auto ff = f.on_arr( m, cx.x->size(), cy.x->size() );
                for ( std::size_t e = 0; e < ftf.size(); ++e )
                {
                    const auto& lhs = cy.theta( ftf[ e ] );
                    auto rhs = t_map( kind, ff, *cx.theta.cod(), *cy.theta.cod(), cx.theta( e ) );
                    record( nat, lhs == rhs, [ & ] {
                        return "f = " + mapping_str( m ) + " at " + cx.theta.dom()->at( e ).str() + ": "
                               + subset_str( cy.theta.cod()->carrier(), lhs ) + " vs "
                               + subset_str( cy.theta.cod()->carrier(), rhs );
                    } );
                }
            }

    auto& unit = rep.add( "unit triangle: vartheta . F unit = unit F" );
    for ( const auto& c : cs )
    {
        mapping eta( c.x->size() );
        for ( std::size_t i = 0; i < eta.size(); ++i )
            eta[ i ] = c.tx.index_of( t_unit( kind, *c.x, i ) );
        const auto feta = f.on_arr( eta, c.x->size(), c.tx.size() );
        const auto& fx = *c.theta.cod();
        for ( std::size_t e = 0; e < feta.size(); ++e )
        {
            const auto& lhs = c.theta( feta[ e ] );
            auto rhs = t_unit( kind, fx, e );
            record( unit, lhs == rhs, [ & ] {
                return "at " + fx.at( e ).str() + ": " + subset_str( fx.carrier(), lhs ) + " vs "
                       + subset_str( fx.carrier(), rhs );
            } );
        }
    }

    auto& mult = rep.add( "multiplication pentagon: vartheta . F mult = mult F . T vartheta . vartheta T" );
    for ( const auto& c : cs )
    {
        const auto& txc = materialized( c.tx );
        t_object ttx( kind, txc );
        auto outer = vartheta( txc );
        if ( outer.dom()->size() != f.obj_size( ttx.size() ) || outer.cod()->size() != c.theta.dom()->size() )
            throw carrier_mismatch( "distributive law component is not of type F T T X -> T F T X" );

        mapping mu( ttx.size() );
        for ( std::size_t i = 0; i < ttx.size(); ++i )
        {
            bits u = c.x->empty_subset();
            const auto& s = ttx.at( i );
            for ( auto j = s.find_first(); j != bits::npos; j = s.find_next( j ) )
                u |= c.tx.at( j );
            mu[ i ] = c.tx.index_of( u );
        }
        const auto fmu = f.on_arr( mu, ttx.size(), c.tx.size() );
        const auto& fx = *c.theta.cod();
        for ( std::size_t e = 0; e < fmu.size(); ++e )
        {
            const auto& lhs = c.theta( fmu[ e ] );
            bits rhs = fx.empty_subset();
            const auto& mid = outer( e );
            for ( auto j = mid.find_first(); j != bits::npos; j = mid.find_next( j ) )
                rhs |= c.theta( j );
            record( mult, lhs == rhs, [ & ] {
                return "at " + outer.dom()->at( e ).str() + ": " + subset_str( fx.carrier(), lhs ) + " vs "
                       + subset_str( fx.carrier(), rhs );
            } );
        }
    }
    return rep;
}

law_report check_lifting_preserves( const relation_lifting& lift, const finite_functor& f, backend b,
                                    const std::vector< poset_ptr >& carriers )
{
    law_report rep;
    auto& id = rep.add( "preserves identity relations: lift Delta = Delta F" );
    for ( const auto& x : carriers )
    {
        auto lhs = lift( delta( b, x ) );
        auto rhs = delta( b, f.on_obj( x ) );
        record( id, lhs == rhs, [ & ] { return "lift Delta = " + lhs.str() + ", Delta F = " + rhs.str(); } );
    }

    std::vector< poset_ptr > small;
    for ( const auto& x : carriers )
        if ( x->size() <= 2 )
            small.push_back( x );

    // Every relation between each pair of small carriers, with its lift.
    struct homs
    {
        std::vector< relation > rels;
        std::vector< relation > lifted;
        std::map< bits, std::size_t > index;
    };
    std::vector< std::vector< homs > > hs( small.size(), std::vector< homs >( small.size() ) );
    for ( std::size_t i = 0; i < small.size(); ++i )
        for ( std::size_t j = 0; j < small.size(); ++j )
        {
            auto pairs = product( small[ i ], involution( b, small[ j ] ) );
            for ( auto& m : all_predicates( b, *pairs ) )
            {
                hs[ i ][ j ].index.emplace( m, hs[ i ][ j ].rels.size() );
                hs[ i ][ j ].rels.emplace_back( b, small[ i ], small[ j ], m );
                hs[ i ][ j ].lifted.push_back( lift( hs[ i ][ j ].rels.back() ) );
            }
        }

    auto& comp = rep.add( "preserves relational composition: lift (S . R) = lift S . lift R",
                          "every pair of relations between carriers of at most 2 elements" );
    auto& agree = rep.add( "composition through theta is relational composition",
                           "every pair of relations between carriers of at most 2 elements, and their lifts" );
    for ( std::size_t i = 0; i < small.size(); ++i )
        for ( std::size_t j = 0; j < small.size(); ++j )
            for ( std::size_t k = 0; k < small.size(); ++k )
            {
                const auto& rs = hs[ i ][ j ];
                const auto& ss = hs[ j ][ k ];
                const auto& out = hs[ i ][ k ];
                for ( std::size_t r = 0; r < rs.rels.size(); ++r )
                    for ( std::size_t s = 0; s < ss.rels.size(); ++s )
                    {
                        auto sr = rel_compose( ss.rels[ s ], rs.rels[ r ] );
                        auto plain = relational_compose( ss.rels[ s ], rs.rels[ r ] );
                        record( agree, sr == plain, [ & ] {
                            return "R = " + rs.rels[ r ].str() + ", S = " + ss.rels[ s ].str() + ": " + sr.str()
                                   + " vs " + plain.str();
                        } );
                        const auto& lhs = out.lifted[ out.index.at( sr.members() ) ];
                        auto rhs = rel_compose( ss.lifted[ s ], rs.lifted[ r ] );
                        auto rhs_plain = relational_compose( ss.lifted[ s ], rs.lifted[ r ] );
                        record( agree, rhs == rhs_plain, [ & ] {
                            return "lift R = " + rs.lifted[ r ].str() + ", lift S = " + ss.lifted[ s ].str();
                        } );
                        record( comp, lhs == rhs, [ & ] {
                            return "R = " + rs.rels[ r ].str() + ", S = " + ss.rels[ s ].str()
                                   + ": lift (S . R) = " + lhs.str() + ", lift S . lift R = " + rhs.str();
                        } );
                    }
            }
    return rep;
}

law_report check_predicate_lifting( const predicate_lifting& sigma, const finite_functor& f, backend b,
                                    const std::vector< poset_ptr >& carriers )
{
    law_report rep;
    auto& nat = rep.add( "naturality: (F g)* . sigma = sigma . g*",
                         "every predicate and every mapping between the carriers" );
    for ( const auto& x : carriers )
        for ( const auto& y : carriers )
        {
            auto fx = f.on_obj( x );
            for ( const auto& g : arrows_between( b, x, y ) )
            {
                const auto fg = f.on_arr( g, x->size(), y->size() );
                for ( auto& m : all_predicates( b, *y ) )
                {
                    predicate p( b, y, m );
                    auto lhs = reindex( fg, fx, sigma.apply( f, p ) );
                    auto rhs = sigma.apply( f, reindex( g, x, p ) );
                    record( nat, lhs == rhs, [ & ] {
                        return "g = " + mapping_str( g ) + ", P = " + p.str() + ": " + lhs.str() + " vs " + rhs.str();
                    } );
                }
            }
        }
    return rep;
}

namespace
{

void validate_square( const square& s )
{
    require_monotone( s.b, s.f, *s.x, *s.y );
    require_monotone( s.b, s.g, *s.x, *s.z );
    require_monotone( s.b, s.k, *s.y, *s.w );
    require_monotone( s.b, s.h, *s.z, *s.w );
    if ( compose( s.k, s.f ) != compose( s.h, s.g ) )
        throw not_commuting( "square " + s.label + " does not commute" );
}

constexpr std::size_t max_exhaustive_predicates = 8;

} // namespace

law_report check_beck_chevalley( const square& s )
{
    validate_square( s );
    law_report rep;
    const auto& z = *s.z;
    std::vector< bits > preds;
    std::string scope = "exhaustive";
    if ( z.size() <= max_exhaustive_predicates )
        preds = all_predicates( s.b, z );
    else
    {
        // Both sides preserve unions, and principal predicates generate.
        preds.push_back( z.empty_subset() );
        for ( std::size_t i = 0; i < z.size(); ++i )
            preds.push_back( s.b == backend::set ? p_unit( z.size(), i ) : z.up_set( i ) );
        scope = "empty and principal predicates, which generate every predicate under unions";
    }
    auto& r = rep.add( "Beck-Chevalley: k* . exists_h = exists_f . g*", scope );
    for ( auto& m : preds )
    {
        predicate p( s.b, s.z, m );
        auto lhs = reindex( s.k, s.y, direct_image( s.h, p, s.w ) );
        auto rhs = direct_image( s.f, reindex( s.g, s.x, p ), s.y );
        record( r, lhs == rhs, [ & ] {
            return "P = " + p.str() + ": k*(exists_h P) = " + lhs.str() + ", exists_f(g* P) = " + rhs.str();
        } );
    }
    return rep;
}

bool is_weak_pullback( const square& s )
{
    validate_square( s );
    for ( std::size_t y = 0; y < s.y->size(); ++y )
        for ( std::size_t z = 0; z < s.z->size(); ++z )
        {
            if ( s.k[ y ] != s.h[ z ] )
                continue;
            bool found = false;
            for ( std::size_t x = 0; x < s.x->size() && !found; ++x )
                found = s.f[ x ] == y && s.g[ x ] == z;
            if ( !found )
                return false;
        }
    return true;
}

square lambda_square( const finite_functor& fun, backend b, const mapping& f, const poset_ptr& x,
                      const poset_ptr& x2, const poset_ptr& y )
{
    require_monotone( b, f, *x, *x2 );
    auto iy = involution( b, y );
    const auto ys = y->size();
    const auto fiy = fun.obj_size( ys );

    mapping fy( x->size() * ys ); // f x I y
    for ( std::size_t i = 0; i < x->size(); ++i )
        for ( std::size_t j = 0; j < ys; ++j )
            fy[ i * ys + j ] = f[ i ] * ys + j;
    const auto ff = fun.on_arr( f, x->size(), x2->size() );
    mapping k( fun.obj_size( x->size() ) * fiy ); // F f x I F y
    for ( std::size_t i = 0; i < ff.size(); ++i )
        for ( std::size_t j = 0; j < fiy; ++j )
            k[ i * fiy + j ] = ff[ i ] * fiy + j;

    square s;
    s.b = b;
    s.x = fun.on_obj( product( x, iy ) );
    s.y = product( fun.on_obj( x ), fun.on_obj( iy ) );
    s.z = fun.on_obj( product( x2, iy ) );
    s.w = product( fun.on_obj( x2 ), fun.on_obj( iy ) );
    s.f = lambda_map( fun, x->size(), ys );
    s.g = fun.on_arr( fy, x->size() * ys, x2->size() * ys );
    s.k = std::move( k );
    s.h = lambda_map( fun, x2->size(), ys );
    s.label = "lambda square of " + fun.name() + " along " + mapping_str( f );
    return s;
}

square counterexample_square()
{
    square s;
    s.x = discrete( fin_set::of_names( { "p" } ) );
    s.y = discrete( fin_set::of_names( { "y1", "y2" } ) );
    s.z = discrete( fin_set::of_names( { "z1", "z2" } ) );
    s.w = discrete( fin_set::of_names( { "*" } ) );
    s.f = { 0 };
    s.g = { 0 };
    s.k = { 0, 0 };
    s.h = { 0, 0 };
    s.label = "constant square";
    return s;
}

} // namespace ctsem
