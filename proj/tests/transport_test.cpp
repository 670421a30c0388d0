#include "ctsem/suites.hpp"
#include "ctsem/transport.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace ctsem;

namespace
{

point_dist make_dist( std::initializer_list< std::pair< const std::size_t, rational > > w )
{
    return point_dist( std::map< std::size_t, rational >( w ) );
}

// 1 - sum of pointwise minima.
rational total_variation( const point_dist& mu, const point_dist& nu )
{
    rational overlap = 0;
    for ( const auto& [ x, w ] : mu )
        overlap += std::min( w, nu.weight( x ) );
    return 1 - overlap;
}

predicate_dist unit_image( const point_dist& mu, std::size_t n )
{
    return push_forward( mu, [ n ]( std::size_t x ) { return pq_unit( n, x ); } );
}

} // namespace

TEST_SUITE( "transport" )
{

TEST_CASE( "Omega arithmetic" )
{
    CHECK( oplus( omega( 1, 2 ), omega( 3, 4 ) ) == omega::one() );
    CHECK( oplus( omega( 1, 4 ), omega( 1, 4 ) ) == omega( 1, 2 ) );
    CHECK( omega_inf( {} ) == omega::one() );
    CHECK( omega_inf( { omega( 1, 3 ), omega( 1, 4 ) } ) == omega( 1, 4 ) );
    CHECK_THROWS_AS( omega( 3, 2 ), out_of_unit_interval );
    CHECK_THROWS_AS( omega( -1, 2 ), out_of_unit_interval );
}

TEST_CASE( "distributions" )
{
    CHECK_THROWS_AS( make_dist( { { 0, rational( 1, 2 ) } } ), infeasible_mass );
    CHECK_THROWS_AS( make_dist( { { 0, rational( 3, 2 ) }, { 1, rational( -1, 2 ) } } ), infeasible_mass );
    auto d = make_dist( { { 0, rational( 1, 3 ) }, { 1, rational( 2, 3 ) }, { 2, 0 } } );
    CHECK( d.support_size() == 2 );
    auto folded = push_forward( d, []( std::size_t ) { return std::size_t{ 0 }; } );
    CHECK( folded == point_dist::point( 0 ) );
    omega_predicate p( { omega( 1, 2 ), omega::zero() } );
    CHECK( expectation_lift( p, d ) == omega( 1, 6 ) );
}

TEST_CASE( "predicate monad" )
{
    CHECK( pq_unit( 3, 1 ) == omega_predicate( { omega::one(), omega::zero(), omega::one() } ) );
    omega_predicate g( { omega( 1, 4 ), omega( 1, 2 ), omega( 3, 4 ) } );
    CHECK( pq_map( { 0, 0, 1 }, 3, g ) == omega_predicate( { omega( 1, 4 ), omega( 3, 4 ), omega::one() } ) );

    omega_predicate2 big( 2, { { omega_predicate( { omega::zero(), omega( 1, 2 ) } ), omega( 1, 4 ) },
                               { omega_predicate( { omega( 1, 2 ), omega::zero() } ), omega( 1, 2 ) } } );
    CHECK( pq_mult( big ) == omega_predicate( { omega( 1, 4 ), omega( 1, 2 ) } ) );

    omega_matrix f{ omega_predicate( { omega( 1, 4 ), omega::one() } ), omega_predicate( { omega::one(), omega::zero() } ) };
    CHECK( pq_kl_compose( pq_kl_identity( 2 ), f ) == f );
    CHECK( pq_kl_compose( f, pq_kl_identity( 2 ) ) == f );
    CHECK( pq_kl_compose( f, f )[ 0 ] == omega_predicate( { omega( 1, 2 ), omega::one() } ) );
}

TEST_CASE( "transport simplex matches vertex enumeration" )
{
    std::mt19937_64 rng( 7 );
    for ( int round = 0; round < 200; ++round )
    {
        const std::size_t m = 1 + rng() % 3, n = 1 + rng() % 3;
        std::vector< long > s( m ), d( n );
        long total = 0;
        for ( auto& v : s )
            total += v = 1 + static_cast< long >( rng() % 5 );
        long left = total;
        for ( std::size_t j = 0; j + 1 < n; ++j )
            left -= d[ j ] = static_cast< long >( rng() % ( left + 1 ) );
        d.back() = left;
        std::vector< rational > supply, demand;
        for ( auto v : s )
            supply.emplace_back( v, total );
        for ( auto v : d )
            demand.emplace_back( v, total );
        std::vector< std::vector< rational > > cost( m, std::vector< rational >( n ) );
        for ( auto& row : cost )
            for ( auto& c : row )
                c = rational( static_cast< long >( rng() % 5 ), 4 );

        auto r = solve_transport( supply, demand, cost );
        CHECK( r.value == oracle::transport_by_vertices( supply, demand, cost ) );
        rational value = 0;
        for ( std::size_t i = 0; i < m; ++i )
        {
            rational row = 0;
            for ( std::size_t j = 0; j < n; ++j )
            {
                CHECK( r.flow[ i ][ j ] >= 0 );
                row += r.flow[ i ][ j ];
                value += r.flow[ i ][ j ] * cost[ i ][ j ];
            }
            CHECK( row == supply[ i ] );
        }
        for ( std::size_t j = 0; j < n; ++j )
        {
            rational col = 0;
            for ( std::size_t i = 0; i < m; ++i )
                col += r.flow[ i ][ j ];
            CHECK( col == demand[ j ] );
        }
        CHECK( value == r.value );
    }
    CHECK_THROWS_AS( (void)solve_transport( { 1 }, { rational( 1, 2 ) }, { { 0 } } ), infeasible_mass );
}

TEST_CASE( "optimal coupling has the right marginals" )
{
    for ( std::size_t n = 1; n <= 3; ++n )
    {
        auto u = random_quantale_probes( n, 11 + n );
        for ( const auto& big_m : u.predicates )
            for ( const auto& mu : u.probes )
            {
                auto c = optimal_coupling( big_m, mu );
                auto [ left, right ] = marginals( c.coupling );
                CHECK( left == big_m );
                CHECK( right == mu );
                rational cost = 0;
                for ( const auto& [ k, w ] : c.coupling )
                    cost += w * k.first[ k.second ].value();
                CHECK( cost == c.value.value() );
            }
    }
}

TEST_CASE( "the law at a unit image is total variation" )
{
    // vartheta(D unit (mu))(nu) = TV(mu, nu), while unit(mu)(nu) is 0 or 1.
    for ( std::size_t n = 1; n <= 3; ++n )
    {
        auto u = random_quantale_probes( n, 3 + n );
        for ( const auto& mu : u.probes )
        {
            theta_quantale law( unit_image( mu, n ) );
            for ( const auto& nu : u.probes )
                CHECK( law( nu ).value() == total_variation( mu, nu ) );
        }
    }
    auto mu = point_dist::point( 0 );
    auto nu = make_dist( { { 0, rational( 6, 7 ) }, { 1, rational( 1, 7 ) } } );
    CHECK( theta_quantale( unit_image( mu, 2 ) )( nu ) == omega( 1, 7 ) );
}

TEST_CASE( "law checks: the unit triangle fails, the rest hold" )
{
    auto one = check_quantale_laws( random_quantale_probes( 1, 5 ) );
    CHECK_MESSAGE( one.all_passed(), one.str() );

    auto r = check_quantale_laws( random_quantale_probes( 2, 5 ) );
    for ( const auto& law : r.laws() )
    {
        const bool unit = law.name.rfind( "unit triangle", 0 ) == 0;
        CHECK_MESSAGE( law.passed != unit, law.name );
        CHECK( law.instances > 0 );
    }
}

TEST_CASE( "naturality needs surjective maps at mixed targets" )
{
    // f : 1 -> 2. No mu over 1 pushes forward to nu, so T D f gives 1 at nu,
    // while coupling the image predicate with nu costs only the stray half.
    const mapping f{ 0 };
    predicate_dist big_m = predicate_dist::point( omega_predicate( { omega::zero() } ) );
    auto image = push_forward( big_m, [ & ]( const omega_predicate& p ) { return pq_map( f, 2, p ); } );
    auto nu = make_dist( { { 0, rational( 1, 2 ) }, { 1, rational( 1, 2 ) } } );
    CHECK( optimal_coupling_value( image, nu ) == omega( 1, 2 ) );
    // At targets inside the image of D f the two sides agree.
    CHECK( optimal_coupling_value( image, point_dist::point( 0 ) ) == omega::zero() );
    CHECK( optimal_coupling_value( image, point_dist::point( 1 ) ) == omega::one() );
}

TEST_CASE( "coupling support is bounded" )
{
    std::map< std::size_t, rational > w;
    for ( std::size_t x = 0; x <= max_coupling_support; ++x )
        w[ x ] = rational( 1, max_coupling_support + 1 );
    CHECK_THROWS_AS( (void)optimal_coupling( predicate_dist::point( omega_predicate::constant(
                                                 max_coupling_support + 1, omega::zero() ) ),
                                             point_dist( w ) ),
                     carrier_too_large );
}

}
