#include "ctsem/cts_io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ctsem
{

namespace
{

struct line_tokens
{
    int line = 0;
    std::vector< std::string > tokens;
};

bool is_identifier( const std::string& s )
{
    return !s.empty() && std::all_of( s.begin(), s.end(), []( unsigned char ch ) {
        return std::isalnum( ch ) || ch == '_' || ch == '\'' || ch == '-';
    } );
}

std::string line_prefix( int line ) { return "line " + std::to_string( line ) + ": "; }

std::size_t resolve( const fin_set& s, const std::string& name, const char* what, int line )
{
    if ( !s.contains( value::atom( name ) ) )
        throw dangling_reference( line_prefix( line ) + "unknown " + what + " '" + name + "'" );
    return s.index_of_name( name );
}

} // namespace

cts_document parse_cts( const std::string& text )
{
    static const std::set< std::string > single{ "conditions", "alphabet", "states", "accepting" };
    static const std::set< std::string > repeated{ "order", "trans" };

    std::map< std::string, line_tokens > lists;
    std::vector< line_tokens > orders, transitions;
    std::map< std::string, int > first_line;

    std::istringstream in( text );
    std::string raw;
    int line = 0;
    while ( std::getline( in, raw ) )
    {
        ++line;
        if ( auto hash = raw.find( '#' ); hash != std::string::npos )
            raw.erase( hash );
        if ( raw.find_first_not_of( " \t\r" ) == std::string::npos )
            continue;
        const auto colon = raw.find( ':' );
        if ( colon == std::string::npos )
            throw syntax_error( line, "expected 'keyword:' at the start of the line" );
        std::istringstream head( raw.substr( 0, colon ) );
        std::string keyword, extra;
        head >> keyword;
        if ( keyword.empty() || ( head >> extra ) )
            throw syntax_error( line, "malformed keyword '" + raw.substr( 0, colon ) + "'" );
        if ( !single.count( keyword ) && !repeated.count( keyword ) )
            throw syntax_error( line, "unknown keyword '" + keyword + "'" );

        line_tokens lt{ line, {} };
        std::istringstream rest( raw.substr( colon + 1 ) );
        for ( std::string tok; rest >> tok; )
        {
            if ( !is_identifier( tok ) && !( keyword == "order" && tok == "<=" ) )
                throw syntax_error( line, "invalid identifier '" + tok + "'" );
            lt.tokens.push_back( tok );
        }
        first_line.emplace( keyword, line );

        if ( keyword == "order" )
        {
            if ( lt.tokens.size() != 3 || lt.tokens[ 1 ] != "<=" )
                throw syntax_error( line, "expected 'order: <condition> <= <condition>'" );
            orders.push_back( std::move( lt ) );
        }
        else if ( keyword == "trans" )
        {
            if ( lt.tokens.size() != 4 )
                throw syntax_error( line, "expected 'trans: <state> <action> <condition> <state>'" );
            transitions.push_back( std::move( lt ) );
        }
        else
        {
            if ( lists.count( keyword ) )
                throw syntax_error( line, "duplicate '" + keyword + ":' section (first on line "
                                              + std::to_string( lists[ keyword ].line ) + ")" );
            std::set< std::string > seen;
            for ( const auto& t : lt.tokens )
                if ( !seen.insert( t ).second )
                    throw syntax_error( line, "'" + t + "' listed twice" );
            if ( keyword != "accepting" && lt.tokens.empty() )
                throw syntax_error( line, "'" + keyword + ":' needs at least one name" );
            lists.emplace( keyword, std::move( lt ) );
        }
    }
    for ( const char* required : { "conditions", "alphabet", "states" } )
        if ( !lists.count( required ) )
            throw syntax_error( line + 1, std::string( "missing '" ) + required + ":' section" );

    auto conds = fin_set::of_names( lists[ "conditions" ].tokens );
    std::vector< std::pair< std::size_t, std::size_t > > pairs;
    auto order = fin_poset::closure( conds, pairs );
    for ( const auto& o : orders )
    {
        pairs.emplace_back( resolve( conds, o.tokens[ 0 ], "condition", o.line ),
                            resolve( conds, o.tokens[ 2 ], "condition", o.line ) );
        try
        {
            order = fin_poset::closure( conds, pairs );
        }
        catch ( const antisymmetry_violation& e )
        {
            throw antisymmetry_violation( line_prefix( o.line ) + e.what() );
        }
    }

    auto alphabet = fin_set::of_names( lists[ "alphabet" ].tokens );
    auto states = fin_set::of_names( lists[ "states" ].tokens );
    bits accepting( states.size() );
    if ( lists.count( "accepting" ) )
        for ( const auto& name : lists[ "accepting" ].tokens )
            accepting.set( resolve( states, name, "state", lists[ "accepting" ].line ) );

    std::vector< transition > ts;
    for ( const auto& t : transitions )
        ts.push_back( { resolve( states, t.tokens[ 0 ], "state", t.line ),
                        resolve( alphabet, t.tokens[ 1 ], "action", t.line ),
                        resolve( conds, t.tokens[ 2 ], "condition", t.line ),
                        resolve( states, t.tokens[ 3 ], "state", t.line ) } );

    return { text, cts( order, std::move( alphabet ), std::move( states ), std::move( ts ), std::move( accepting ) ),
             std::move( first_line ) };
}

std::string print_cts( const cts& c )
{
    std::ostringstream out;
    auto names = [ & ]( const fin_set& s ) {
        std::string r;
        for ( const auto& v : s.elements() )
            r += " " + v.str();
        return r;
    };
    const auto& k = *c.conditions();
    out << "conditions:" << names( k.carrier() ) << "\n";
    for ( std::size_t i = 0; i < k.size(); ++i )
        for ( std::size_t j = 0; j < k.size(); ++j )
        {
            if ( i == j || !k.leq( i, j ) )
                continue;
            bool covers = true;
            for ( std::size_t m = 0; m < k.size() && covers; ++m )
                covers = m == i || m == j || !( k.leq( i, m ) && k.leq( m, j ) );
            if ( covers )
                out << "order: " << k.at( i ).str() << " <= " << k.at( j ).str() << "\n";
        }
    out << "alphabet:" << names( c.alphabet() ) << "\n";
    out << "states:" << names( c.states() ) << "\n";
    out << "accepting:";
    for ( auto x = c.accepting().find_first(); x != bits::npos; x = c.accepting().find_next( x ) )
        out << " " << c.states().at( x ).str();
    out << "\n";
    for ( const auto& t : c.transitions() )
        out << "trans: " << c.states().at( t.from ).str() << " " << c.alphabet().at( t.action ).str() << " "
            << k.at( t.cond ).str() << " " << c.states().at( t.to ).str() << "\n";
    return out.str();
}

} // namespace ctsem
