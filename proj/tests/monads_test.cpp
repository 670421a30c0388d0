#include "ctsem/monads.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ctsem;
using support::subset;

TEST_SUITE( "monads" )
{

TEST_CASE( "powerset operations" )
{
    CHECK( p_unit( 3, 1 ) == subset( 3, { 1 } ) );
    CHECK( p_mult( 3, { subset( 3, { 0 } ), subset( 3, { 2 } ) } ) == subset( 3, { 0, 2 } ) );
    CHECK( p_mult( 3, {} ) == subset( 3, {} ) );
    CHECK( p_map( { 1, 1, 0 }, 2, subset( 3, { 0, 1 } ) ) == subset( 2, { 1 } ) );
}

TEST_CASE( "downset operations" )
{
    auto k = chain( { "lo", "hi" } );
    const auto lo = k->index_of( value::atom( "lo" ) );
    const auto hi = k->index_of( value::atom( "hi" ) );
    CHECK( pd_unit( *k, hi ) == k->full_subset() );
    CHECK( pd_unit( *k, lo ) == subset( 2, { lo } ) );
    CHECK_THROWS_AS( (void)pd_mult( *k, { subset( 2, { hi } ) } ), not_down_closed );

    auto point = support::set_of( { "*" } );
    CHECK( pd_map( { 0, 0 }, *k, *point, k->full_subset() ) == subset( 1, { 0 } ) );

    auto flip = chain( { "0", "1" } );
    mapping rev( 2 );
    rev[ lo ] = flip->index_of( value::atom( "1" ) );
    rev[ hi ] = flip->index_of( value::atom( "0" ) );
    CHECK_THROWS_AS( (void)pd_map( rev, *k, *flip, k->full_subset() ), not_monotone );
}

TEST_CASE( "T X enumerates the T-values" )
{
    for ( std::size_t n = 1; n <= 4; ++n )
        for ( const auto& p : posets_up_to_iso( n ) )
        {
            t_object tp( monad_kind::powerset, p );
            CHECK( tp.size() == ( std::size_t{ 1 } << n ) );
            t_object td( monad_kind::downset, p );
            CHECK( td.size() == all_down_closed( *p ).size() );
            for ( const auto& s : all_subsets( n ) )
                CHECK( is_t_value( monad_kind::downset, *p, s ) == is_down_closed( *p, s ) );
        }
    // Downsets of a 3-chain: {}, {0}, {0,1}, {0,1,2}.
    CHECK( t_object( monad_kind::downset, chain( { "a", "b", "c" } ) ).size() == 4 );
}

TEST_CASE( "standard monads satisfy the laws" )
{
    for ( std::size_t n = 1; n <= 3; ++n )
    {
        for ( const auto& p : posets_up_to_iso( n ) )
            CHECK( check_monad_laws( standard_monad( monad_kind::downset ), p ).all_passed() );
        CHECK( check_monad_laws( standard_monad( monad_kind::powerset ), support::set_of( { "a", "b", "c" } ) )
                   .all_passed() );
    }
}

TEST_CASE( "broken instances are caught" )
{
    auto x = support::set_of( { "a", "b" } );

    auto no_unit = standard_monad( monad_kind::powerset );
    no_unit.unit = []( const fin_poset& p, std::size_t ) { return p.empty_subset(); };
    auto r = check_monad_laws( no_unit, x );
    CHECK_FALSE( r.all_passed() );

    auto first_only = standard_monad( monad_kind::powerset );
    first_only.mult = []( const fin_poset& p, const std::vector< bits >& fam ) {
        return fam.empty() ? p.empty_subset() : fam.front();
    };
    r = check_monad_laws( first_only, x );
    CHECK_FALSE( r.all_passed() );
    for ( const auto& law : r.laws() )
        if ( !law.passed )
            CHECK( law.counterexample.has_value() );
}

}
