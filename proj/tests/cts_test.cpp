#include "ctsem/cts.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ctsem;

namespace
{

const observation_mode acceptance{ observation_kind::acceptance };
const observation_mode ready{ observation_kind::ready };
const observation_mode failure{ observation_kind::failure };

std::size_t cond( const cts& c, const char* name ) { return c.conditions()->index_of( value::atom( name ) ); }
std::size_t state( const cts& c, const char* name ) { return c.states().index_of_name( name ); }
std::size_t letter( const cts& c, const char* name ) { return c.alphabet().index_of_name( name ); }

std::uint64_t mask( const cts& c, std::initializer_list< const char* > names )
{
    std::uint64_t m = 0;
    for ( auto n : names )
        m |= std::uint64_t{ 1 } << letter( c, n );
    return m;
}

word spelled( const cts& c, std::initializer_list< const char* > names )
{
    std::vector< std::size_t > as;
    for ( auto n : names )
        as.push_back( letter( c, n ) );
    return make_word( as, c.alphabet().size() );
}

// a(b + c) against ab + ac.
cts branching_pair()
{
    return cts::from_names( support::set_of( { "p" } ), { "a", "b", "c" },
                            { "s", "s1", "s2", "t", "t1", "t2", "t3" }, { "s2", "t3" },
                            { { { "s", "a", "p", "s1" } },
                              { { "s1", "b", "p", "s2" } },
                              { { "s1", "c", "p", "s2" } },
                              { { "t", "a", "p", "t1" } },
                              { { "t", "a", "p", "t2" } },
                              { { "t1", "b", "p", "t3" } },
                              { { "t2", "c", "p", "t3" } } } );
}

std::vector< std::size_t > all_conditions( const cts& c )
{
    std::vector< std::size_t > ks( c.conditions()->size() );
    for ( std::size_t k = 0; k < ks.size(); ++k )
        ks[ k ] = k;
    return ks;
}

} // namespace

TEST_SUITE( "cts" )
{

TEST_CASE( "words" )
{
    for ( std::size_t letters = 1; letters <= 4; ++letters )
    {
        CHECK( max_word_length( letters ) > 0 );
        std::vector< std::size_t > as;
        for ( std::size_t i = 0; i < 6; ++i )
            as.push_back( ( i * 7 + 3 ) % letters );
        auto w = make_word( as, letters );
        CHECK( spell( w, letters ) == as );
        CHECK( w.length == as.size() );
        CHECK( append( make_word( { as.begin(), as.end() - 1 }, letters ), as.back(), letters ) == w );
        CHECK( prepend( as.front(), make_word( { as.begin() + 1, as.end() }, letters ), letters ) == w );
    }
    // Shortlex: shorter first, then lexicographic.
    CHECK( make_word( { 1 }, 2 ) < make_word( { 0, 0 }, 2 ) );
    CHECK( make_word( { 0, 1 }, 2 ) < make_word( { 1, 0 }, 2 ) );

    auto e1 = example_e1();
    CHECK( word_str( {}, e1.alphabet() ) == "eps" );
    CHECK( word_str( spelled( e1, { "a", "b" } ), e1.alphabet() ) == "ab" );
    CHECK( word_str( make_word( { 0, 1 }, 2 ), fin_set::of_names( { "go", "stop" } ) ) == "go.stop" );
    CHECK( subset_mask_str( mask( e1, { "a", "b" } ), e1.alphabet() ) == "{a,b}" );
}

TEST_CASE( "construction checks references" )
{
    CHECK_THROWS_AS( cts::from_names( support::set_of( { "p" } ), { "a" }, { "x" }, {}, { { { "x", "a", "p", "t" } } } ),
                     dangling_reference );
    CHECK_THROWS_AS( cts( support::set_of( { "p" } ), fin_set::of_names( { "a" } ), fin_set::of_names( { "x" } ),
                          { { 0, 1, 0, 0 } }, bits( 1 ) ),
                     dangling_reference );
}

TEST_CASE( "down-closure validation" )
{
    auto e1 = example_e1();
    CHECK( validate( e1 ).empty() );
    CHECK( validate( example_e2() ).empty() );

    // A transition at the top condition is missing below.
    auto top = cts::from_names( chain( { "k2", "k1" } ), { "a" }, { "x", "y" }, { "y" },
                                { { { "x", "a", "k1", "y" } } } );
    auto missing = validate( top );
    REQUIRE( missing.size() == 1 );
    CHECK( missing[ 0 ].cond == cond( top, "k2" ) );
    auto done = complete( top );
    CHECK( validate( done ).empty() );
    CHECK( complete( done ) == done );
    CHECK( done.transitions().size() == 2 );

    for ( std::uint64_t seed = 0; seed < 50; ++seed )
        CHECK( validate( random_cts( seed ) ).empty() );
}

TEST_CASE( "failure with upgrades is rejected" )
{
    CHECK_THROWS_AS( observation_mode( observation_kind::failure, true ), failure_with_upgrades );
    CHECK_NOTHROW( observation_mode( observation_kind::ready, true ) );

    auto v = refusal_downclosure_witness( example_e2() );
    auto e2 = example_e2();
    REQUIRE( v.has_value() );
    CHECK( v->k == cond( e2, "k1" ) );
    CHECK( v->lower == cond( e2, "k2" ) );
    CHECK( v->x == state( e2, "x" ) );
    CHECK( v->refused == mask( e2, { "a" } ) );
    CHECK_FALSE( refusal_downclosure_witness( example_e1() ).has_value() );
}

TEST_CASE( "observation spaces" )
{
    auto e1 = example_e1();
    CHECK( make_observation_space( acceptance, e1.alphabet() ).size() == 1 );
    auto r = make_observation_space( observation_mode( observation_kind::ready, true ), e1.alphabet() );
    CHECK( r.size() == 4 );
    CHECK( r.carrier->leq( r.index.at( 0 ), r.index.at( 3 ) ) );
    CHECK( make_observation_space( ready, e1.alphabet() ).carrier->is_discrete() );
}

TEST_CASE( "direct semantics of the first example" )
{
    auto e1 = example_e1();
    const auto x = state( e1, "x" );
    const auto p = cond( e1, "p" ), q = cond( e1, "q" );
    CHECK( direct_language( e1, x, p, 4 ) == std::vector< word >{ spelled( e1, { "a", "b" } ) } );
    CHECK( direct_language( e1, x, q, 4 ) == std::vector< word >{ spelled( e1, { "a" } ) } );

    auto r = direct_ready( e1, x, p, 4 );
    CHECK( std::count( r.begin(), r.end(), std::pair{ spelled( e1, { "a" } ), mask( e1, { "b" } ) } ) == 1 );
    CHECK( std::count( r.begin(), r.end(), std::pair{ word{}, mask( e1, { "a" } ) } ) == 1 );
    auto f = direct_failure( e1, x, p, 4 );
    CHECK( std::count( f.begin(), f.end(), std::pair{ spelled( e1, { "a" } ), mask( e1, { "a" } ) } ) == 1 );
    CHECK( std::count( f.begin(), f.end(), std::pair{ spelled( e1, { "a" } ), mask( e1, { "b" } ) } ) == 0 );
}

TEST_CASE( "direct semantics against path enumeration" )
{
    for ( std::uint64_t seed = 0; seed < 40; ++seed )
    {
        auto c = random_cts( seed );
        for ( std::size_t x = 0; x < c.states().size(); ++x )
            for ( std::size_t k = 0; k < c.conditions()->size(); ++k )
            {
                std::set< oracle::letters > lang;
                for ( const auto& w : direct_language( c, x, k, 4 ) )
                    lang.insert( spell( w, c.alphabet().size() ) );
                CHECK( lang == oracle::language( c, x, k, 4 ) );
                for ( bool refusals : { false, true } )
                {
                    std::set< std::pair< oracle::letters, std::uint64_t > > dec;
                    for ( const auto& [ w, u ] : refusals ? direct_failure( c, x, k, 4 ) : direct_ready( c, x, k, 4 ) )
                        dec.insert( { spell( w, c.alphabet().size() ), u } );
                    CHECK( dec == oracle::decorated( c, x, k, 4, refusals ) );
                }
            }
    }
}

TEST_CASE( "the coalgebra of the first example" )
{
    auto e1 = example_e1();
    auto alpha = build_alpha( e1, acceptance );
    const auto p = cond( e1, "p" );
    const auto& ms = alpha.space;
    // (p, x) -> {(p, inl(a, y))}; (p, z) -> {(p, inr accept)}
    auto expected = support::subset( ms.bx.g->size(),
                                     { ms.bx.index( p, ms.b_left( letter( e1, "a" ), state( e1, "y" ) ) ) } );
    CHECK( alpha.alpha( p, state( e1, "x" ) ) == expected );
    expected = support::subset( ms.bx.g->size(), { ms.bx.index( p, ms.b_right( 0 ) ) } );
    CHECK( alpha.alpha( p, state( e1, "z" ) ) == expected );
}

TEST_CASE( "fixpoint traces of the worked examples" )
{
    auto e1 = example_e1();
    auto f = fixpoint_traces( build_alpha( e1, acceptance ), 3 );
    const auto p = cond( e1, "p" ), q = cond( e1, "q" );
    const auto x = state( e1, "x" );
    using cell = std::vector< std::pair< word, std::uint64_t > >;
    CHECK( f.cell( p, x ) == cell{ { spelled( e1, { "a", "b" } ), std::uint64_t{ 1 } << p } } );
    CHECK( f.cell( q, x ) == cell{ { spelled( e1, { "a" } ), std::uint64_t{ 1 } << q } } );
    CHECK( f.stabilized );
    CHECK_FALSE( fixpoint_traces( build_alpha( e1, acceptance ), 2 ).stabilized );

    auto e2 = example_e2();
    auto g = fixpoint_traces( build_alpha( e2, observation_mode( observation_kind::acceptance, true ) ), 2 );
    const auto k1 = cond( e2, "k1" ), k2 = cond( e2, "k2" );
    CHECK( g.cell( k1, state( e2, "x" ) ) == cell{ { spelled( e2, { "a" } ), std::uint64_t{ 1 } << k2 } } );
    CHECK( g.cell( k2, state( e2, "x" ) ) == cell{ { spelled( e2, { "a" } ), std::uint64_t{ 1 } << k2 } } );
    // Without upgrades k1 is stuck.
    auto h = fixpoint_traces( build_alpha( e2, acceptance ), 2 );
    CHECK( h.cell( k1, state( e2, "x" ) ).empty() );
}

TEST_CASE( "fixpoint and closed form coincide" )
{
    for ( std::size_t d = 0; d <= 5; ++d )
    {
        for ( const auto& m : { acceptance, ready, failure } )
            CHECK( coincidence_check( example_e1(), m, d ).all_passed() );
        for ( auto kind : { observation_kind::acceptance, observation_kind::ready } )
            CHECK( coincidence_check( example_e2(), observation_mode( kind, true ), d ).all_passed() );
    }
    for ( std::uint64_t seed = 100; seed < 130; ++seed )
    {
        auto c = random_cts( seed );
        for ( const auto& m : { acceptance, ready, failure, observation_mode( observation_kind::acceptance, true ),
                                observation_mode( observation_kind::ready, true ) } )
        {
            auto r = coincidence_check( c, m, default_depth( c ) );
            CHECK_MESSAGE( r.all_passed(), r.str() );
        }
    }
}

TEST_CASE( "one condition is a plain transition system" )
{
    random_cts_params params;
    params.max_conditions = 1;
    for ( std::uint64_t seed = 0; seed < 30; ++seed )
    {
        auto c = random_cts( seed, params );
        REQUIRE( c.conditions()->size() == 1 );
        const std::size_t depth = 4;
        auto f = fixpoint_traces( build_alpha( c, acceptance ), depth );
        for ( std::size_t x = 0; x < c.states().size(); ++x )
        {
            std::set< oracle::letters > got;
            for ( const auto& [ w, m ] : f.cell( 0, x ) )
            {
                CHECK( m == 1 );
                got.insert( spell( w, c.alphabet().size() ) );
            }
            CHECK( got == oracle::language( c, x, 0, depth - 1 ) );
        }
    }
}

TEST_CASE( "behaviour grows along the condition order under upgrades" )
{
    for ( std::uint64_t seed = 0; seed < 30; ++seed )
    {
        auto c = random_cts( seed );
        const auto& k = *c.conditions();
        for ( auto kind : { observation_kind::acceptance, observation_kind::ready } )
        {
            auto f = fixpoint_traces( build_alpha( c, observation_mode( kind, true ) ), 3 );
            for ( std::size_t lo = 0; lo < k.size(); ++lo )
                for ( std::size_t hi = 0; hi < k.size(); ++hi )
                    if ( k.leq( lo, hi ) )
                        for ( std::size_t x = 0; x < c.states().size(); ++x )
                        {
                            std::map< word, std::uint64_t > upper( f.cell( hi, x ).begin(), f.cell( hi, x ).end() );
                            for ( const auto& [ w, m ] : f.cell( lo, x ) )
                                CHECK( ( upper.count( w ) && ( m & ~upper[ w ] ) == 0 ) );
                        }
        }
    }
}

TEST_CASE( "language equivalence does not imply ready equivalence" )
{
    auto c = branching_pair();
    const auto s = state( c, "s" ), t = state( c, "t" );
    CHECK( behaviour_equiv( c, acceptance, s, t ).equivalent );
    auto v = behaviour_equiv( c, ready, s, t );
    REQUIRE_FALSE( v.equivalent );
    REQUIRE( v.witness.has_value() );
    CHECK( v.witness->w == spelled( c, { "a" } ) );
    CHECK( v.witness->observation == mask( c, { "b", "c" } ) );
    CHECK( v.witness->first_has );
    CHECK_FALSE( behaviour_equiv( c, failure, s, t ).equivalent );
}

TEST_CASE( "equivalence of the first example" )
{
    auto e1 = example_e1();
    const auto x = state( e1, "x" ), z = state( e1, "z" );
    auto v = behaviour_equiv( e1, acceptance, x, z, cond( e1, "p" ) );
    REQUIRE( v.witness.has_value() );
    CHECK( word_str( v.witness->w, e1.alphabet() ) == "ab" );
    CHECK( v.witness->first_has );
    CHECK( behaviour_equiv( e1, acceptance, x, x ).equivalent );
}

TEST_CASE( "equivalence against the bounded pair sweep" )
{
    for ( std::uint64_t seed = 0; seed < 60; ++seed )
    {
        auto c = random_cts( seed );
        for ( const auto& m : { acceptance, ready, failure } )
            for ( std::size_t x = 0; x < c.states().size(); ++x )
                for ( std::size_t y = x + 1; y < c.states().size(); ++y )
                {
                    auto v = behaviour_equiv( c, m, x, y );
                    CHECK( v.equivalent
                           == oracle::equal_up_to( c, m.kind(), x, y, all_conditions( c ), 2 * v.det_states + 1 ) );
                    if ( v.equivalent )
                        continue;
                    REQUIRE( v.witness.has_value() );
                    const auto& w = *v.witness;
                    const auto letters = spell( w.w, c.alphabet().size() );
                    auto mine = oracle::observations( c, m.kind(), w.condition,
                                                      oracle::reach( c, w.condition, w.first_has ? x : y, letters ) );
                    auto theirs = oracle::observations( c, m.kind(), w.condition,
                                                        oracle::reach( c, w.condition, w.first_has ? y : x, letters ) );
                    const auto o = w.observation.value_or( 0 );
                    CHECK( mine.count( o ) == 1 );
                    CHECK( theirs.count( o ) == 0 );
                }
    }
}

}
