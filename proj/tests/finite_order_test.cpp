#include "support.hpp"

#include <doctest.h>

using namespace ctsem;
using support::subset;

TEST_SUITE( "finite_order" )
{

TEST_CASE( "closure is reflexive and transitive" )
{
    auto s = fin_set::of_names( { "a", "b", "c" } );
    auto p = fin_poset::closure( s, { { 0, 1 }, { 1, 2 } } );
    CHECK( p->leq( 0, 2 ) );
    CHECK( p->leq( 1, 1 ) );
    CHECK_FALSE( p->leq( 2, 0 ) );

    auto d = fin_poset::closure( fin_set::of_names( { "p", "q" } ), {} );
    CHECK( d->is_discrete() );

    CHECK_THROWS_AS( (void)fin_poset::closure( fin_set::of_names( { "a", "b" } ), { { 0, 1 }, { 1, 0 } } ),
                     antisymmetry_violation );
}

TEST_CASE( "closure is idempotent" )
{
    for ( std::size_t n = 1; n <= 4; ++n )
        for ( const auto& p : posets_up_to_iso( n ) )
            CHECK( same_poset( fin_poset::closure( p->carrier(), p->strict_pairs() ), p ) );
}

TEST_CASE( "down and up closures" )
{
    auto k = chain( { "k2", "k1" } );
    const auto k1 = k->index_of( value::atom( "k1" ) );
    CHECK( down_close( *k, subset( 2, { k1 } ) ) == k->full_subset() );

    auto d = support::set_of( { "a", "b", "c" } );
    for ( const auto& s : all_subsets( 3 ) )
        CHECK( down_close( *d, s ) == s );

    // Least down-closed superset, by exhaustion.
    for ( std::size_t n = 1; n <= 4; ++n )
        for ( const auto& p : posets_up_to_iso( n ) )
            for ( const auto& s : all_subsets( n ) )
            {
                auto c = down_close( *p, s );
                CHECK( is_down_closed( *p, c ) );
                CHECK( s.is_subset_of( c ) );
                for ( const auto& t : all_down_closed( *p ) )
                    if ( s.is_subset_of( t ) )
                        CHECK( c.is_subset_of( t ) );
                CHECK( down_close( *p, c ) == c );
                CHECK( down_close( *dual( p ), s ) == up_close( *p, s ) );
            }
}

TEST_CASE( "dual" )
{
    for ( const auto& p : posets_up_to_iso( 3 ) )
        CHECK( same_poset( dual( dual( p ) ), p ) );
    auto d = support::set_of( { "a", "b" } );
    CHECK( same_poset( dual( d ), d ) );
    auto k = chain( { "k2", "k1" } );
    CHECK( same_poset( dual( k ), chain( { "k1", "k2" } ) ) );
}

TEST_CASE( "product, coproduct and discrete" )
{
    auto c = chain( { "0", "1" } );
    auto pq = product( c, c );
    CHECK( pq->size() == 4 );
    CHECK( pq->leq( pq->index_of( value::pair( value::atom( "0" ), value::atom( "0" ) ) ),
                    pq->index_of( value::pair( value::atom( "1" ), value::atom( "1" ) ) ) ) );

    for ( std::size_t n = 1; n <= 3; ++n )
        for ( const auto& p : posets_up_to_iso( n ) )
            for ( const auto& q : posets_up_to_iso( 2 ) )
            {
                auto r = product( p, q );
                for ( std::size_t i = 0; i < r->size(); ++i )
                    for ( std::size_t j = 0; j < r->size(); ++j )
                        CHECK( r->leq( i, j )
                               == ( p->leq( i / q->size(), j / q->size() )
                                    && q->leq( i % q->size(), j % q->size() ) ) );
            }

    auto s = coproduct( c, c );
    CHECK( s->size() == 4 );
    for ( std::size_t i = 0; i < 2; ++i )
        for ( std::size_t j = 2; j < 4; ++j )
            CHECK_FALSE( s->leq( i, j ) );

    auto d = support::set_of( { "a", "b" } );
    std::size_t comparable = 0;
    for ( std::size_t i = 0; i < 2; ++i )
        for ( std::size_t j = 0; j < 2; ++j )
            comparable += d->leq( i, j );
    CHECK( comparable == 2 );
}

TEST_CASE( "monotonicity" )
{
    auto k = chain( { "k2", "k1" } );
    auto c = chain( { "0", "1" } );
    CHECK( is_monotone( identity_mapping( 2 ), *k, *k ) );
    CHECK( is_monotone( { 0, 0 }, *k, *c ) );
    // k2 -> 1, k1 -> 0 reverses the order.
    mapping rev( 2 );
    rev[ k->index_of( value::atom( "k2" ) ) ] = 1;
    rev[ k->index_of( value::atom( "k1" ) ) ] = 0;
    CHECK_FALSE( is_monotone( rev, *k, *c ) );
}

TEST_CASE( "posets up to isomorphism" )
{
    // 1, 2, 5, 16 unlabelled posets on 1..4 points.
    CHECK( posets_up_to_iso( 1 ).size() == 1 );
    CHECK( posets_up_to_iso( 2 ).size() == 2 );
    CHECK( posets_up_to_iso( 3 ).size() == 5 );
    CHECK( posets_up_to_iso( 4 ).size() == 16 );
}

}
