#include "ctsem/dlaw.hpp"
#include "ctsem/suites.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ctsem;
using support::subset;

namespace
{

std::vector< finite_functor > functors()
{
    const auto ab = fin_set::of_names( { "a", "b" } );
    return { a_functor( ab ), b_functor( ab, support::set_of( { "o1", "o2" } ) ) };
}

} // namespace

TEST_SUITE( "dlaw" )
{

TEST_CASE( "theta is a bijection between arrows and relations" )
{
    for ( auto b : { backend::set, backend::pos } )
        for ( const auto& x : law_carriers( b, 2 ) )
            for ( const auto& y : law_carriers( b, 2 ) )
                for ( const auto& f : all_kl_arrows( b, x, y ) )
                {
                    auto r = theta( f );
                    CHECK( theta_inv( r ) == f );
                    for ( std::size_t i = 0; i < x->size(); ++i )
                        for ( std::size_t j = 0; j < y->size(); ++j )
                            CHECK( r.contains( i, j ) == f( i )[ j ] );
                }
}

TEST_CASE( "Pos relations are up-closed on the left and down-closed on the right" )
{
    auto k = chain( { "lo", "hi" } );
    auto pt = support::set_of( { "*" } );
    const auto lo = k->index_of( value::atom( "lo" ) );
    // {(lo, *)} alone is not up-closed in the first component.
    CHECK_THROWS( relation( backend::pos, k, pt, subset( 2, { lo } ) ) );
    CHECK_NOTHROW( relation( backend::pos, k, pt, subset( 2, { 0, 1 } ) ) );
}

TEST_CASE( "composition of relations" )
{
    for ( auto b : { backend::set, backend::pos } )
        for ( const auto& x : law_carriers( b, 2 ) )
        {
            auto d = delta( b, x );
            for ( const auto& f : all_kl_arrows( b, x, x ) )
            {
                auto r = theta( f );
                CHECK( rel_compose( d, r ) == r );
                CHECK( rel_compose( r, d ) == r );
                CHECK( relational_compose( r, r ) == rel_compose( r, r ) );
            }
            CHECK( d == theta( kl_identity( b, x ) ) );
        }
}

TEST_CASE( "reindexing and direct image" )
{
    auto x = support::set_of( { "a", "b", "c" } );
    auto y = support::set_of( { "u", "v" } );
    const mapping f{ 0, 0, 1 };
    predicate p( backend::set, y, subset( 2, { 0 } ) );
    CHECK( reindex( f, x, p ).members() == subset( 3, { 0, 1 } ) );
    predicate q( backend::set, x, subset( 3, { 2 } ) );
    CHECK( direct_image( f, q, y ).members() == subset( 2, { 1 } ) );

    // Up-closed images in Pos.
    auto k = chain( { "lo", "hi" } );
    auto pt = support::set_of( { "*" } );
    predicate one( backend::pos, pt, subset( 1, { 0 } ) );
    CHECK( direct_image( { k->index_of( value::atom( "lo" ) ) }, one, k ).members() == k->full_subset() );
}

TEST_CASE( "the law of the standard lifting has the closed form" )
{
    const auto sigma = standard_predicate_lifting();
    for ( auto b : { backend::set, backend::pos } )
        for ( const auto& f : functors() )
        {
            auto lift = make_relation_lifting( sigma, f );
            for ( const auto& x : law_carriers( b, 3 ) )
            {
                auto law = build_dlaw( lift, b, x );
                for ( std::size_t i = 0; i < law.dom()->size(); ++i )
                {
                    bits expected( law.cod()->size() );
                    for ( const auto& v : oracle::dlaw_closed_form( f.kind, law.dom()->at( i ) ) )
                        expected.set( law.cod()->index_of( v ) );
                    CHECK_MESSAGE( law( i ) == expected, law.dom()->at( i ).str() );
                }
            }
        }
}

TEST_CASE( "the standard lifting satisfies the laws" )
{
    const auto sigma = standard_predicate_lifting();
    for ( auto b : { backend::set, backend::pos } )
        for ( const auto& f : functors() )
        {
            const auto carriers = law_carriers( b, 2 );
            auto lift = make_relation_lifting( sigma, f );
            auto r = check_kl_law( [ & ]( const poset_ptr& x ) { return build_dlaw( lift, b, x ); }, f, b, carriers );
            CHECK_MESSAGE( r.all_passed(), r.str() );
            r = check_lifting_preserves( lift, f, b, carriers );
            CHECK_MESSAGE( r.all_passed(), r.str() );
            r = check_predicate_lifting( sigma, f, b, carriers );
            CHECK_MESSAGE( r.all_passed(), r.str() );
        }
}

TEST_CASE( "mutated liftings are rejected" )
{
    for ( const auto& m : sigma_mutants() )
        for ( auto b : { backend::set, backend::pos } )
        {
            const auto f = functors()[ 1 ];
            const auto carriers = law_carriers( b, 2 );
            auto lift = make_relation_lifting( m, f );
            auto pres = check_lifting_preserves( lift, f, b, carriers );
            auto law = check_kl_law( [ & ]( const poset_ptr& x ) { return build_dlaw( lift, b, x ); }, f, b,
                                     carriers );
            CHECK_MESSAGE( !( pres.all_passed() && law.all_passed() ), m.name );
        }
}

TEST_CASE( "lambda squares satisfy Beck-Chevalley" )
{
    for ( auto b : { backend::set, backend::pos } )
        for ( const auto& f : functors() )
            for ( const auto& x : law_carriers( b, 2 ) )
                for ( const auto& y : law_carriers( b, 2 ) )
                    for ( const auto& m : b == backend::set ? all_mappings( x->size(), y->size() )
                                                            : all_monotone( *x, *y ) )
                    {
                        auto s = lambda_square( f, b, m, x, y, x );
                        CHECK( is_weak_pullback( s ) );
                        CHECK( check_beck_chevalley( s ).all_passed() );
                    }
}

TEST_CASE( "a square that is not a weak pullback fails Beck-Chevalley" )
{
    auto s = counterexample_square();
    CHECK_FALSE( is_weak_pullback( s ) );
    auto r = check_beck_chevalley( s );
    REQUIRE_FALSE( r.all_passed() );
    const auto& w = *r.laws().front().counterexample;
    CHECK( w.find( "{y1,y2}" ) != std::string::npos );
    CHECK( w.find( "{y1}" ) != std::string::npos );

    s.h = { 0, 1 };
    s.w = support::set_of( { "0", "1" } );
    s.k = { 0, 0 };
    s.g = { 1 };
    CHECK_THROWS_AS( (void)check_beck_chevalley( s ), not_commuting );
}

}
