#include "ctsem/cts_io.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace ctsem;

namespace
{

std::string slurp( const std::string& name )
{
    std::ifstream in( std::string( CTSEM_DATA_DIR ) + "/" + name );
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

template < class E >
std::string error_of( const std::string& text )
{
    try
    {
        (void)parse_cts( text );
    }
    catch ( const E& e )
    {
        return e.what();
    }
    return "no error";
}

} // namespace

TEST_SUITE( "cts_io" )
{

TEST_CASE( "data files hold the worked examples" )
{
    CHECK( parse_cts( slurp( "e1.cts" ) ).system == example_e1() );
    CHECK( parse_cts( slurp( "e2.cts" ) ).system == example_e2() );
}

TEST_CASE( "printing round-trips" )
{
    for ( const auto& c : { example_e1(), example_e2() } )
    {
        const auto text = print_cts( c );
        CHECK( parse_cts( text ).system == c );
        CHECK( print_cts( parse_cts( text ).system ) == text );
    }
    for ( std::uint64_t seed = 0; seed < 50; ++seed )
    {
        auto c = random_cts( seed );
        CHECK( parse_cts( print_cts( c ) ).system == c );
    }
    CHECK( print_cts( example_e2() ).find( "order: k2 <= k1\n" ) != std::string::npos );
}

TEST_CASE( "comments, blank lines and section lines" )
{
    auto doc = parse_cts( "# header\n\nconditions: p\nalphabet: a  # trailing\nstates: x\ntrans: x a p x\n" );
    CHECK( doc.system.transitions().size() == 1 );
    CHECK( doc.system.accepting().none() );
    CHECK( doc.section_lines.at( "alphabet" ) == 4 );
    CHECK( doc.section_lines.at( "trans" ) == 6 );
}

TEST_CASE( "order lines are closed transitively" )
{
    auto doc = parse_cts( "conditions: a b c\norder: a <= b\norder: b <= c\nalphabet: x\nstates: s\n" );
    const auto& k = *doc.system.conditions();
    CHECK( k.leq( k.index_of( value::atom( "a" ) ), k.index_of( value::atom( "c" ) ) ) );
}

TEST_CASE( "errors name the line" )
{
    CHECK( error_of< antisymmetry_violation >( "conditions: a b\norder: a <= b\norder: b <= a\nalphabet: x\nstates: s\n" )
               .rfind( "line 3: ", 0 )
           == 0 );
    CHECK( error_of< dangling_reference >( "conditions: p\nalphabet: a\nstates: x\ntrans: x a p t\n" )
           == "line 4: unknown state 't'" );
    CHECK( error_of< dangling_reference >( "conditions: p\nalphabet: a\nstates: x\naccepting: y\n" )
           == "line 4: unknown state 'y'" );
    CHECK( error_of< dangling_reference >( "conditions: p\norder: p <= r\nalphabet: a\nstates: x\n" )
           == "line 2: unknown condition 'r'" );

    auto line_of = []( const std::string& text ) {
        try
        {
            (void)parse_cts( text );
        }
        catch ( const syntax_error& e )
        {
            return e.line();
        }
        return 0;
    };
    CHECK( line_of( "conditions: p\nalphabet a\n" ) == 2 );
    CHECK( line_of( "conditions: p\nalphabet: a\nstates: x\nbogus: y\n" ) == 4 );
    CHECK( line_of( "conditions: p\nconditions: q\n" ) == 2 );
    CHECK( line_of( "conditions: p p\n" ) == 1 );
    CHECK( line_of( "conditions: p\nalphabet: a\nstates: x\ntrans: x a p\n" ) == 4 );
    CHECK( line_of( "conditions: p\nalphabet: a\nstates: x\norder: p < p\n" ) == 4 );
    CHECK( line_of( "conditions: p\nalphabet: a!\n" ) == 2 );
    CHECK( line_of( "conditions:\n" ) == 1 );
    CHECK( line_of( "conditions: p\nalphabet: a\n" ) == 3 );
}

}
