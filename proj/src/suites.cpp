#include "ctsem/suites.hpp"

#include <algorithm>
#include <random>

namespace ctsem
{

std::vector< poset_ptr > law_carriers( backend b, std::size_t max_size )
{
    std::vector< poset_ptr > out;
    for ( std::size_t n = 1; n <= max_size; ++n )
    {
        if ( b == backend::pos )
        {
            for ( auto& p : posets_up_to_iso( n ) )
                out.push_back( p );
            continue;
        }
        std::vector< std::string > names;
        for ( std::size_t i = 0; i < n; ++i )
            names.push_back( "x" + std::to_string( i ) );
        out.push_back( discrete( fin_set::of_names( names ) ) );
    }
    return out;
}

namespace
{

// sigma restricted to the letters in `letters` and, if `observations`, all of O.
predicate lift_subset( const finite_functor& f, const predicate& p, std::size_t letters, bool observations )
{
    auto fx = f.on_obj( p.carrier() );
    if ( f.kind == functor_kind::identity )
        return { p.get_backend(), fx, p.members() };
    const auto xs = p.carrier()->size();
    bits m( fx->size() );
    for ( std::size_t a = 0; a < std::min( letters, f.shape.alphabet.size() ); ++a )
        for ( auto x = p.members().find_first(); x != bits::npos; x = p.members().find_next( x ) )
            m.set( a * xs + x );
    if ( observations )
        for ( auto i = f.shape.alphabet.size() * xs; i < m.size(); ++i )
            m.set( i );
    return { p.get_backend(), fx, std::move( m ) };
}

} // namespace

std::vector< predicate_lifting > sigma_mutants()
{
    return {
        { "empty", []( const finite_functor& f, const predicate& p ) {
             auto fx = f.on_obj( p.carrier() );
             return predicate( p.get_backend(), fx, fx->empty_subset() );
         } },
        { "full", []( const finite_functor& f, const predicate& p ) {
             auto fx = f.on_obj( p.carrier() );
             return predicate( p.get_backend(), fx, fx->full_subset() );
         } },
        { "first letter only",
          []( const finite_functor& f, const predicate& p ) { return lift_subset( f, p, 1, true ); } },
        { "observations dropped",
          []( const finite_functor& f, const predicate& p ) { return lift_subset( f, p, 64, false ); } },
    };
}

law_report monad_suite( std::size_t size_bound )
{
    law_report rep;
    for ( auto b : { backend::set, backend::pos } )
    {
        const auto m = standard_monad( monad_of( b ) );
        std::size_t i = 0;
        for ( const auto& x : law_carriers( b, size_bound ) )
            rep.append( check_monad_laws( m, x ), std::string( b == backend::set ? "powerset" : "downset" ) + " on "
                                                      + std::to_string( x->size() ) + " elements #"
                                                      + std::to_string( i++ ) + ": " );
    }
    return rep;
}

law_report kleisli_suite( std::size_t size_bound )
{
    law_report rep;
    const auto bound = std::min< std::size_t >( size_bound, 2 );
    const std::vector< poset_ptr > conds{ discrete( fin_set::of_names( { "p" } ) ),
                                          discrete( fin_set::of_names( { "p", "q" } ) ), chain( { "k2", "k1" } ) };
    const std::vector< fin_set > alphabets{ fin_set::of_names( { "a" } ), fin_set::of_names( { "a", "b" } ) };
    const std::vector< poset_ptr > observations{ discrete( fin_set::of_names( { "o" } ) ),
                                                 discrete( fin_set::of_names( { "o", "u" } ) ) };
    for ( auto b : { backend::set, backend::pos } )
    {
        const std::string tag = to_string( b );
        const auto carriers = law_carriers( b, bound );
        rep.append( check_kleisli_laws( b, carriers ), tag + " Kl(T): " );
        for ( const auto& k : conds )
        {
            if ( b == backend::set && !k->is_discrete() )
                continue;
            const auto ktag = tag + " K = " + subset_str( k->carrier(), k->full_subset() )
                              + ( k->is_discrete() ? "" : " (chain)" );
            // Every carrier with one condition; with two, only the largest carriers,
            // whose arrows restrict to those of the smaller ones.
            auto rel_carriers = carriers;
            if ( k->size() > 1 )
                std::erase_if( rel_carriers, [ bound ]( const poset_ptr& x ) { return x->size() != bound; } );
            rep.append( check_relkl_laws( b, k, rel_carriers ), ktag + " Kl(T.G): " );
            if ( k->size() < 2 )
                continue;
            for ( const auto& a : alphabets )
                for ( const auto& o : observations )
                    rep.append( check_lifting_theorems( b, { a, o }, k, carriers ),
                                ktag + " |A| = " + std::to_string( a.size() ) + " |O| = " + std::to_string( o->size() )
                                    + ": " );
        }
    }
    return rep;
}

law_report dlaw_suite( std::size_t size_bound )
{
    law_report rep;
    const auto ab = fin_set::of_names( { "a", "b" } );
    const std::vector< finite_functor > functors{ a_functor( ab ),
                                                  b_functor( ab, discrete( fin_set::of_names( { "o1", "o2" } ) ) ) };
    const auto sigma = standard_predicate_lifting();
    for ( auto b : { backend::set, backend::pos } )
    {
        const auto carriers = law_carriers( b, size_bound );
        for ( const auto& f : functors )
        {
            const auto tag = std::string( to_string( b ) ) + " " + f.name() + ": ";
            auto lift = make_relation_lifting( sigma, f );
            rep.append( check_kl_law( [ & ]( const poset_ptr& x ) { return build_dlaw( lift, b, x ); }, f, b,
                                      carriers ),
                        tag );
            rep.append( check_lifting_preserves( lift, f, b, carriers ), tag );
            rep.append( check_predicate_lifting( sigma, f, b, carriers ), tag );
        }

        auto& wp = rep.add( std::string( to_string( b ) ) + ": lambda squares are weak pullbacks" );
        auto& bc = rep.add( std::string( to_string( b ) ) + ": Beck-Chevalley on lambda squares" );
        for ( const auto& f : functors )
            for ( const auto& x : carriers )
                for ( const auto& x2 : carriers )
                    for ( const auto& y : carriers )
                        for ( const auto& m :
                              b == backend::set ? all_mappings( x->size(), x2->size() ) : all_monotone( *x, *x2 ) )
                        {
                            auto s = lambda_square( f, b, m, x, x2, y );
                            record( wp, is_weak_pullback( s ), [ & ] { return s.label; } );
                            auto r = check_beck_chevalley( s );
                            record( bc, r.all_passed(), [ & ] { return s.label + ": " + r.str(); } );
                        }
    }

    // Negative control: the law must fail here.
    auto c = counterexample_square();
    auto r = check_beck_chevalley( c );
    auto& ctl = rep.add( "non-pullback square violates Beck-Chevalley",
                         r.all_passed() ? "control" : "control, witness " + *r.laws().front().counterexample );
    record( ctl, !is_weak_pullback( c ) && !r.all_passed(), [] { return std::string( "Beck-Chevalley held" ); } );
    return rep;
}

namespace
{

rational random_weight( std::mt19937_64& rng ) { return rational( 1 + static_cast< long >( rng() % 6 ) ); }

point_dist random_dist( std::mt19937_64& rng, std::size_t n )
{
    std::map< std::size_t, rational > w;
    for ( std::size_t x = 0; x < n; ++x )
        if ( rng() % 3 != 0 )
            w[ x ] = random_weight( rng );
    if ( w.empty() )
        w[ rng() % n ] = 1;
    rational total = 0;
    for ( const auto& [ x, v ] : w )
        total += v;
    for ( auto& [ x, v ] : w )
        v /= total;
    return point_dist( w );
}

omega random_omega( std::mt19937_64& rng ) { return omega( static_cast< long >( rng() % 5 ), 4 ); }

omega_predicate random_predicate( std::mt19937_64& rng, std::size_t n )
{
    std::vector< omega > w( n );
    for ( auto& v : w )
        v = random_omega( rng );
    return omega_predicate( std::move( w ) );
}

template < class K, class Gen >
dist< K > random_mixture( std::mt19937_64& rng, std::size_t support, Gen&& gen )
{
    std::map< K, rational > w;
    for ( std::size_t i = 0; i < support; ++i )
        w[ gen() ] += random_weight( rng );
    rational total = 0;
    for ( const auto& [ k, v ] : w )
        total += v;
    for ( auto& [ k, v ] : w )
        v /= total;
    return dist< K >( w );
}

} // namespace

quantale_probes random_quantale_probes( std::size_t carrier, std::uint64_t seed, std::size_t probe_count )
{
    std::mt19937_64 rng( seed );
    const auto n = carrier;
    quantale_probes u;
    u.carrier = n;
    for ( std::size_t i = 0; i < probe_count; ++i )
        u.probes.push_back( random_dist( rng, n ) );
    for ( std::size_t x = 0; x < n; ++x )
        u.probes.push_back( point_dist::point( x ) );

    for ( std::size_t x = 0; x < n; ++x )
        u.unit_inputs.push_back( point_dist::point( x ) );
    u.unit_inputs.push_back( u.probes.front() );

    for ( int i = 0; i < 3; ++i )
        u.predicates.push_back(
            random_mixture< omega_predicate >( rng, 2, [ & ] { return random_predicate( rng, n ); } ) );
    for ( int i = 0; i < 3; ++i )
        u.nested.push_back( random_mixture< omega_predicate2 >( rng, 2, [ & ] {
            std::map< omega_predicate, omega > w;
            for ( int j = 0; j < 2; ++j )
                w[ random_predicate( rng, n ) ] = random_omega( rng );
            return omega_predicate2( n, w );
        } ) );

    for ( std::size_t m = 1; m <= std::min< std::size_t >( n, 2 ); ++m )
        for ( auto& f : all_mappings( n, m ) )
            u.mappings.push_back( { f, m } );
    u.mappings.push_back( { identity_mapping( n ), n } );
    return u;
}

law_report quantale_suite( std::size_t size_bound, std::uint64_t seed )
{
    law_report rep;
    for ( std::size_t n = 1; n <= std::min< std::size_t >( size_bound, 3 ); ++n )
        rep.append( check_quantale_laws( random_quantale_probes( n, seed + n ) ),
                    "|X| = " + std::to_string( n ) + ": " );
    return rep;
}

} // namespace ctsem
