#include "ctsem/kleisli.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ctsem;
using support::subset;

namespace
{

// (g . f)(x) as the union of g over f(x), written out directly.
std::vector< bits > compose_by_union( const kl_arrow& g, const kl_arrow& f )
{
    std::vector< bits > out;
    for ( std::size_t x = 0; x < f.dom()->size(); ++x )
    {
        bits u( g.cod()->size() );
        for ( std::size_t y = 0; y < f.cod()->size(); ++y )
            if ( f( x )[ y ] )
                u |= g( y );
        out.push_back( u );
    }
    return out;
}

std::size_t count_monotone_downset_tables( const poset_ptr& dom, const poset_ptr& cod )
{
    const auto values = all_down_closed( *cod );
    std::size_t count = 0;
    std::vector< std::size_t > pick( dom->size() );
    for ( ;; )
    {
        bool ok = true;
        for ( std::size_t i = 0; i < dom->size() && ok; ++i )
            for ( std::size_t j = 0; j < dom->size() && ok; ++j )
                if ( dom->leq( i, j ) )
                    ok = values[ pick[ i ] ].is_subset_of( values[ pick[ j ] ] );
        count += ok;
        std::size_t i = 0;
        while ( i < pick.size() && ++pick[ i ] == values.size() )
            pick[ i++ ] = 0;
        if ( i == pick.size() )
            return count;
    }
}

} // namespace

TEST_SUITE( "kleisli" )
{

TEST_CASE( "composition is relational composition" )
{
    for ( auto b : { backend::set, backend::pos } )
        for ( const auto& x : posets_up_to_iso( 2 ) )
        {
            if ( b == backend::set && !x->is_discrete() )
                continue;
            const auto arrows = all_kl_arrows( b, x, x );
            for ( const auto& f : arrows )
                for ( const auto& g : arrows )
                    CHECK( kl_compose( g, f ).table() == compose_by_union( g, f ) );
        }
}

TEST_CASE( "arrow enumeration" )
{
    auto two = support::set_of( { "a", "b" } );
    auto three = support::set_of( { "a", "b", "c" } );
    CHECK( all_kl_arrows( backend::set, two, three ).size() == 64 );
    for ( std::size_t n = 1; n <= 3; ++n )
        for ( const auto& x : posets_up_to_iso( n ) )
            for ( const auto& y : posets_up_to_iso( 2 ) )
                CHECK( all_kl_arrows( backend::pos, x, y ).size() == count_monotone_downset_tables( x, y ) );

    CHECK_THROWS_AS( (void)all_kl_arrows( backend::set, three, three, 100 ), carrier_too_large );
}

TEST_CASE( "Pos arrows must be monotone and downset-valued" )
{
    auto k = chain( { "lo", "hi" } );
    const auto lo = k->index_of( value::atom( "lo" ) );
    const auto hi = k->index_of( value::atom( "hi" ) );
    CHECK_THROWS_AS( kl_arrow( backend::pos, k, k, { subset( 2, { hi } ), subset( 2, { hi } ) } ), not_down_closed );
    std::vector< bits > shrinking( 2 );
    shrinking[ lo ] = k->full_subset();
    shrinking[ hi ] = k->empty_subset();
    CHECK_THROWS_AS( kl_arrow( backend::pos, k, k, shrinking ), not_monotone );
}

TEST_CASE( "joins, bottom and order" )
{
    auto x = support::set_of( { "a", "b" } );
    kl_arrow f( backend::set, x, x, { subset( 2, { 0 } ), subset( 2, {} ) } );
    kl_arrow g( backend::set, x, x, { subset( 2, { 1 } ), subset( 2, { 1 } ) } );
    auto j = kl_join( { f, g } );
    CHECK( j.table() == std::vector< bits >{ subset( 2, { 0, 1 } ), subset( 2, { 1 } ) } );
    CHECK( kl_order( f, j ) );
    CHECK( kl_order( g, j ) );
    CHECK_FALSE( kl_order( j, f ) );
    auto bot = kl_bottom( backend::set, x, x );
    CHECK( kl_order( bot, f ) );
    CHECK( kl_compose( f, bot ) == bot );
    CHECK( kl_compose( kl_identity( backend::set, x ), f ) == f );
}

TEST_CASE( "generators join to every arrow" )
{
    for ( auto b : { backend::set, backend::pos } )
        for ( const auto& x : posets_up_to_iso( 2 ) )
        {
            if ( b == backend::set && !x->is_discrete() )
                continue;
            const auto gens = kl_generators( b, x, x );
            for ( const auto& f : all_kl_arrows( b, x, x ) )
            {
                std::vector< kl_arrow > below{ kl_bottom( b, x, x ) };
                for ( const auto& g : gens )
                    if ( kl_order( g, f ) )
                        below.push_back( g );
                CHECK( kl_join( below ) == f );
            }
        }
}

TEST_CASE( "copairing" )
{
    auto x = support::set_of( { "a" } );
    auto z = support::set_of( { "u", "v" } );
    kl_arrow f( backend::set, x, z, { subset( 2, { 0 } ) } );
    kl_arrow g( backend::set, x, z, { subset( 2, { 1 } ) } );
    auto c = kl_copair( f, g );
    CHECK( c.dom()->size() == 2 );
    CHECK( c( 0 ) == subset( 2, { 0 } ) );
    CHECK( c( 1 ) == subset( 2, { 1 } ) );
}

TEST_CASE( "Kl(T) laws on small carriers" )
{
    for ( auto b : { backend::set, backend::pos } )
    {
        std::vector< poset_ptr > carriers;
        for ( std::size_t n = 1; n <= 2; ++n )
            for ( const auto& p : posets_up_to_iso( n ) )
                if ( b == backend::pos || p->is_discrete() )
                    carriers.push_back( p );
        auto r = check_kleisli_laws( b, carriers );
        CHECK_MESSAGE( r.all_passed(), r.str() );
    }
}

TEST_CASE( "relative Kleisli category" )
{
    auto k = support::set_of( { "p" } );
    auto x = support::set_of( { "a", "b" } );
    auto sx = make_rel_space( k, x );
    CHECK( sx.g->size() == 2 );
    auto id = relkl_id( backend::set, sx );
    for ( const auto& f : all_relkl_arrows( backend::set, sx, sx ) )
    {
        CHECK( relkl_compose( id, f ) == f );
        CHECK( relkl_compose( f, id ) == f );
    }
    auto r = check_relkl_laws( backend::pos, chain( { "k2", "k1" } ), { support::set_of( { "x" } ) } );
    CHECK_MESSAGE( r.all_passed(), r.str() );
}

TEST_CASE( "B-hat keeps observations and moves letters" )
{
    machine_shape shape{ fin_set::of_names( { "a" } ), support::set_of( { "o" } ) };
    auto k = support::set_of( { "p" } );
    auto x = support::set_of( { "x", "y" } );
    auto sx = make_rel_space( k, x );
    // x -> {y}, y -> {}
    auto f = relkl_arrow::make( backend::set, sx, sx, { subset( 2, { 1 } ), subset( 2, {} ) } );
    auto ms = make_machine_space( shape, k, x );
    auto bf = lift_b_hat( ms, ms, f );
    const auto bsize = ms.bx.base->size();
    CHECK( bsize == 3 );
    CHECK( bf( 0, ms.b_left( 0, 0 ) ) == subset( bsize, { ms.b_left( 0, 1 ) } ) );
    CHECK( bf( 0, ms.b_left( 0, 1 ) ).none() );
    CHECK( bf( 0, ms.b_right( 0 ) ) == subset( bsize, { ms.b_right( 0 ) } ) );

    auto af = lift_a_tilde( shape, f );
    CHECK( af( 0, ms.a_index( 0, 0 ) ) == subset( 2, { ms.a_index( 0, 1 ) } ) );
}

TEST_CASE( "lifting theorems" )
{
    machine_shape shape{ fin_set::of_names( { "a" } ), support::set_of( { "o" } ) };
    auto r = check_lifting_theorems( backend::pos, shape, chain( { "k2", "k1" } ), { support::set_of( { "x" } ) } );
    CHECK_MESSAGE( r.all_passed(), r.str() );
    r = check_lifting_theorems( backend::set, shape, support::set_of( { "p", "q" } ),
                                { support::set_of( { "x" } ), support::set_of( { "x", "y" } ) } );
    CHECK_MESSAGE( r.all_passed(), r.str() );
}

}
