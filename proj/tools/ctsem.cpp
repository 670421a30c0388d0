// ctsem: command-line front end for the CTS semantics library.

#include "ctsem/cts_io.hpp"
#include "ctsem/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace ctsem;
using json = nlohmann::json;

namespace
{

struct witness_row
{
    std::string condition;
    std::string word;
    std::string observation;
    std::string state; // whose behaviour has the observation
};

struct report
{
    std::string command;
    std::optional< std::string > input_digest;
    std::string verdict;
    std::vector< witness_row > witnesses;
    law_report laws;
    std::optional< std::size_t > depth;
    std::optional< bool > stabilized;
    json extra = json::object();
    std::vector< std::string > body; // text-mode lines after the header
    int exit_code = 0;
};

report make_report( std::string command, std::optional< std::string > digest = std::nullopt, std::string verdict = {} )
{
    report r;
    r.command = std::move( command );
    r.input_digest = std::move( digest );
    r.verdict = std::move( verdict );
    return r;
}

// Usage errors that name the offending flag.
class usage_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string sha256_hex( const std::string& data )
{
    unsigned char md[ EVP_MAX_MD_SIZE ];
    unsigned int len = 0;
    if ( EVP_Digest( data.data(), data.size(), md, &len, EVP_sha256(), nullptr ) != 1 )
        throw std::runtime_error( "SHA-256 unavailable" );
    std::ostringstream out;
    for ( unsigned int i = 0; i < len; ++i )
        out << std::hex << std::setw( 2 ) << std::setfill( '0' ) << static_cast< int >( md[ i ] );
    return out.str();
}

std::string read_input( const std::string& path )
{
    std::ostringstream buf;
    if ( path == "-" )
    {
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw usage_error( path + ": cannot open" );
    buf << in.rdbuf();
    return buf.str();
}

observation_mode parse_mode( const std::string& mode, bool upgrades )
{
    if ( mode == "fail" && upgrades )
        throw usage_error( "--mode fail cannot be combined with --upgrades: refusal sets are not down-closed in "
                           "the conditions" );
    const auto kind = mode == "ready"  ? observation_kind::ready
                      : mode == "fail" ? observation_kind::failure
                                       : observation_kind::acceptance;
    return observation_mode( kind, upgrades );
}

std::size_t lookup( const fin_set& s, const std::string& name, const std::string& flag )
{
    if ( !s.contains( value::atom( name ) ) )
        throw usage_error( flag + ": unknown name '" + name + "'" );
    return s.index_of_name( name );
}

std::string observation_str( const observation_space& obs, std::size_t o, const fin_set& alphabet )
{
    return obs.kind == observation_kind::acceptance ? "accept" : subset_mask_str( obs.subsets[ o ], alphabet );
}

std::string pad( std::string s, std::size_t width )
{
    if ( s.size() < width )
        s.append( width - s.size(), ' ' );
    return s;
}

// Columns padded to their widest entry; rows[0] is the header.
std::vector< std::string > table( const std::vector< std::vector< std::string > >& rows )
{
    std::vector< std::size_t > width;
    for ( const auto& r : rows )
        for ( std::size_t i = 0; i < r.size(); ++i )
        {
            width.resize( std::max( width.size(), r.size() ) );
            width[ i ] = std::max( width[ i ], r[ i ].size() );
        }
    std::vector< std::string > out;
    for ( const auto& r : rows )
    {
        std::string line;
        for ( std::size_t i = 0; i < r.size(); ++i )
            line += i + 1 == r.size() ? r[ i ] : pad( r[ i ], width[ i ] + 2 );
        out.push_back( line );
    }
    return out;
}

void render_text( const report& r, std::ostream& out )
{
    std::vector< std::vector< std::string > > head{ { "command", r.command } };
    if ( r.input_digest )
        head.push_back( { "input", "sha256:" + *r.input_digest } );
    head.push_back( { "verdict", r.verdict } );
    if ( r.depth )
        head.push_back( { "depth", std::to_string( *r.depth ) } );
    if ( r.stabilized )
        head.push_back( { "stabilized", *r.stabilized ? "yes" : "no" } );
    for ( const auto& w : r.witnesses )
        head.push_back( { "witness", w.condition + " : " + w.word + " / " + w.observation + "  (" + w.state + " only)" } );
    for ( const auto& line : table( head ) )
        out << line << "\n";
    if ( !r.body.empty() )
        out << "\n";
    for ( const auto& line : r.body )
        out << line << "\n";
    if ( !r.laws.laws().empty() )
    {
        std::vector< std::vector< std::string > > rows{ { "status", "instances", "law", "scope" } };
        for ( const auto& l : r.laws.laws() )
            rows.push_back( { l.passed ? "PASS" : "FAIL", std::to_string( l.instances ), l.name, l.scope } );
        out << "\n";
        auto lines = table( rows );
        out << lines[ 0 ] << "\n";
        std::size_t i = 1;
        for ( const auto& l : r.laws.laws() )
        {
            out << lines[ i++ ] << "\n";
            if ( l.counterexample )
                out << "      counterexample: " << *l.counterexample << "\n";
        }
    }
}

void render_json( const report& r, std::ostream& out )
{
    json j = r.extra;
    j[ "command" ] = r.command;
    j[ "input_digest" ] = r.input_digest ? json( *r.input_digest ) : json( nullptr );
    j[ "verdict" ] = r.verdict;
    j[ "witnesses" ] = json::array();
    for ( const auto& w : r.witnesses )
        j[ "witnesses" ].push_back(
            { { "condition", w.condition }, { "word", w.word }, { "observation", w.observation }, { "state", w.state } } );
    j[ "laws" ] = json::array();
    for ( const auto& l : r.laws.laws() )
    {
        json e{ { "name", l.name },
                { "status", l.passed ? "pass" : "fail" },
                { "instances", l.instances },
                { "scope", l.scope } };
        if ( l.counterexample )
            e[ "counterexample" ] = *l.counterexample;
        j[ "laws" ].push_back( std::move( e ) );
    }
    j[ "depth" ] = r.depth ? json( *r.depth ) : json( nullptr );
    j[ "stabilized" ] = r.stabilized ? json( *r.stabilized ) : json( nullptr );
    out << j.dump( 2 ) << "\n";
}

struct loaded
{
    std::string digest;
    cts_document doc;
};

loaded load( const std::string& path )
{
    auto text = read_input( path );
    auto digest = sha256_hex( text );
    return { digest, parse_cts( text ) };
}

std::string transition_str( const cts& c, const transition& t )
{
    return c.states().at( t.from ).str() + " " + c.alphabet().at( t.action ).str() + " "
           + c.conditions()->at( t.cond ).str() + " " + c.states().at( t.to ).str();
}

report cmd_validate( const loaded& in )
{
    const auto& c = in.doc.system;
    auto r = make_report( "validate", in.digest );
    const auto missing = validate( c );
    auto& law = r.laws.add( "transitions are down-closed in the conditions",
                            "every transition against every lower condition" );
    r.extra[ "missing" ] = json::array();
    for ( const auto& t : missing )
    {
        record( law, false, [ & ] { return "missing trans: " + transition_str( c, t ); } );
        r.extra[ "missing" ].push_back( transition_str( c, t ) );
        r.body.push_back( "missing  trans: " + transition_str( c, t ) );
    }
    if ( missing.empty() )
        record( law, true );
    r.verdict = missing.empty() ? "down-closed" : "not down-closed";
    r.exit_code = missing.empty() ? 0 : 1;
    return r;
}

report cmd_complete( const loaded& in )
{
    const auto& c = in.doc.system;
    auto done = complete( c );
    auto r = make_report( "complete", in.digest, "completed" );
    r.extra[ "added" ] = done.transitions().size() - c.transitions().size();
    r.extra[ "document" ] = print_cts( done );
    std::istringstream lines( print_cts( done ) );
    for ( std::string line; std::getline( lines, line ); )
        r.body.push_back( line );
    return r;
}

struct semantics_flags
{
    std::string mode = "lang";
    bool upgrades = false;
    std::optional< std::string > state;
    std::optional< std::string > condition;
    std::optional< std::size_t > depth;
    std::string method = "fixpoint";
};

report cmd_semantics( const loaded& in, const semantics_flags& f )
{
    const auto& c = in.doc.system;
    const auto mode = parse_mode( f.mode, f.upgrades );
    const auto depth = f.depth.value_or( default_depth( c ) );
    std::string echo = "semantics --mode " + f.mode + ( f.upgrades ? " --upgrades" : "" ) + " --depth "
                       + std::to_string( depth ) + " --method " + f.method;
    if ( f.state )
        echo += " --state " + *f.state;
    if ( f.condition )
        echo += " --condition " + *f.condition;
    auto r = make_report( echo, in.digest, "ok" );
    r.depth = depth;

    std::optional< std::size_t > only_x, only_k;
    if ( f.state )
        only_x = lookup( c.states(), *f.state, "--state" );
    if ( f.condition )
        only_k = lookup( c.conditions()->carrier(), *f.condition, "--condition" );

    const auto obs = make_observation_space( mode, c.alphabet() );
    decorated_behaviour beh;
    if ( f.method == "direct" )
        beh = closed_form_traces( c, mode, depth );
    else
    {
        beh = fixpoint_traces( build_alpha( c, mode ), depth );
        r.stabilized = beh.stabilized;
    }

    std::vector< std::vector< std::string > > rows{ { "state", "condition", "final", "word", "observation" } };
    r.extra[ "traces" ] = json::array();
    for ( std::size_t x = 0; x < c.states().size(); ++x )
        for ( std::size_t k = 0; k < c.conditions()->size(); ++k )
        {
            if ( ( only_x && *only_x != x ) || ( only_k && *only_k != k ) )
                continue;
            for ( const auto& [ w, m ] : beh.cell( k, x ) )
                for ( std::size_t bit = 0; bit < 64; ++bit )
                    if ( ( m >> bit ) & 1U )
                    {
                        std::vector< std::string > row{ c.states().at( x ).str(), c.conditions()->at( k ).str(),
                                                        c.conditions()->at( bit / obs.size() ).str(),
                                                        word_str( w, c.alphabet() ),
                                                        observation_str( obs, bit % obs.size(), c.alphabet() ) };
                        r.extra[ "traces" ].push_back( { { "state", row[ 0 ] },
                                                         { "condition", row[ 1 ] },
                                                         { "final_condition", row[ 2 ] },
                                                         { "word", row[ 3 ] },
                                                         { "observation", row[ 4 ] } } );
                        rows.push_back( std::move( row ) );
                    }
        }
    r.body = table( rows );
    return r;
}

report cmd_equiv( const loaded& in, const std::string& mode_name, bool upgrades,
                  const std::vector< std::string >& pair, const std::optional< std::string >& condition )
{
    const auto& c = in.doc.system;
    const auto mode = parse_mode( mode_name, upgrades );
    const auto x = lookup( c.states(), pair.at( 0 ), "--pair" );
    const auto y = lookup( c.states(), pair.at( 1 ), "--pair" );
    std::optional< std::size_t > k;
    std::string echo = "equiv --mode " + mode_name + ( upgrades ? " --upgrades" : "" ) + " --pair " + pair[ 0 ] + " "
                       + pair[ 1 ];
    if ( condition )
    {
        k = lookup( c.conditions()->carrier(), *condition, "--condition" );
        echo += " --condition " + *condition;
    }
    const auto v = behaviour_equiv( c, mode, x, y, k );
    auto r = make_report( echo, in.digest, v.equivalent ? "equivalent" : "inequivalent" );
    r.extra[ "determinised_states" ] = v.det_states;
    if ( v.witness )
    {
        const auto& w = *v.witness;
        r.witnesses.push_back( { c.conditions()->at( w.condition ).str(), word_str( w.w, c.alphabet() ),
                                 w.observation ? subset_mask_str( *w.observation, c.alphabet() ) : "accept",
                                 pair[ w.first_has ? 0 : 1 ] } );
    }
    r.exit_code = v.equivalent ? 0 : 1;
    return r;
}

report cmd_coincide( const loaded& in, const std::string& mode_name, bool upgrades, std::optional< std::size_t > depth )
{
    const auto& c = in.doc.system;
    const auto mode = parse_mode( mode_name, upgrades );
    const auto d = depth.value_or( default_depth( c ) );
    auto r = make_report( "coincide --mode " + mode_name + ( upgrades ? " --upgrades" : "" ) + " --depth " + std::to_string( d ),
              in.digest );
    r.laws = coincidence_check( c, mode, d );
    r.depth = d;
    r.stabilized = fixpoint_traces( build_alpha( c, mode ), d ).stabilized;
    r.verdict = r.laws.all_passed() ? "coincide" : "mismatch";
    r.exit_code = r.laws.all_passed() ? 0 : 1;
    return r;
}

report cmd_laws( const std::string& suite, std::size_t size_bound, std::uint64_t seed )
{
    auto r = make_report( "laws --suite " + suite + " --size-bound " + std::to_string( size_bound ) + " --seed "
              + std::to_string( seed ) );
    if ( suite == "monads" )
        r.laws = monad_suite( size_bound );
    else if ( suite == "kleisli" )
        r.laws = kleisli_suite( size_bound );
    else if ( suite == "dlaw" )
        r.laws = dlaw_suite( size_bound );
    else
        r.laws = quantale_suite( size_bound, seed );
    r.verdict = r.laws.all_passed() ? "pass" : "fail";
    r.exit_code = r.laws.all_passed() ? 0 : 1;
    return r;
}

// " with a < b, ..." listing the strict order, empty for discrete carriers.
std::string order_str( const fin_poset& p )
{
    std::string out;
    for ( std::size_t i = 0; i < p.size(); ++i )
        for ( std::size_t j = 0; j < p.size(); ++j )
            if ( i != j && p.leq( i, j ) )
                out += ( out.empty() ? " with " : ", " ) + p.at( i ).str() + " < " + p.at( j ).str();
    return out;
}

report cmd_dlaw_show( std::size_t n )
{
    if ( n < 1 || n > 3 )
        throw usage_error( "--carrier-size: must be between 1 and 3" );
    auto r = make_report( "dlaw-show --carrier-size " + std::to_string( n ), std::nullopt, "ok" );
    const auto ab = fin_set::of_names( { "a", "b" } );
    const std::vector< finite_functor > functors{ a_functor( ab ),
                                                  b_functor( ab, discrete( fin_set::of_names( { "o" } ) ) ) };
    r.extra[ "tables" ] = json::array();
    for ( auto b : { backend::set, backend::pos } )
        for ( const auto& x : law_carriers( b, n ) )
        {
            if ( x->size() != n )
                continue;
            for ( const auto& f : functors )
            {
                const auto th = build_dlaw( make_relation_lifting( standard_predicate_lifting(), f ), b, x );
                const auto title = std::string( to_string( b ) ) + " " + f.name() + " on X = "
                                   + subset_str( x->carrier(), x->full_subset() )
                                   + order_str( *x );
                json t{ { "backend", std::string( to_string( b ) ) }, { "functor", f.name() }, { "carrier", title } };
                t[ "rows" ] = json::array();
                std::vector< std::vector< std::string > > rows{ { "input", "vartheta" } };
                for ( std::size_t i = 0; i < th.dom()->size(); ++i )
                {
                    rows.push_back( { th.dom()->at( i ).str(), subset_str( th.cod()->carrier(), th( i ) ) } );
                    t[ "rows" ].push_back( { { "input", rows.back()[ 0 ] }, { "output", rows.back()[ 1 ] } } );
                }
                r.extra[ "tables" ].push_back( std::move( t ) );
                if ( !r.body.empty() )
                    r.body.emplace_back();
                r.body.push_back( title );
                for ( auto& line : table( rows ) )
                    r.body.push_back( "  " + line );
            }
        }
    return r;
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "Coalgebraic trace semantics of conditional transition systems" };
    app.require_subcommand( 1 );
    bool as_json = false;
    app.add_flag( "--json", as_json, "Canonical JSON report" );

    std::string file;
    auto add_file = [ & ]( CLI::App* sub ) {
        sub->add_option( "file", file, "CTS file, or - for standard input" )->required();
    };
    const std::vector< std::string > modes{ "lang", "ready", "fail" };

    auto* validate_cmd = app.add_subcommand( "validate", "Check down-closure of the transitions" );
    add_file( validate_cmd );
    auto* complete_cmd = app.add_subcommand( "complete", "Add missing down-closure instances" );
    add_file( complete_cmd );

    semantics_flags sf;
    auto* semantics_cmd = app.add_subcommand( "semantics", "Decorated traces per (state, condition)" );
    add_file( semantics_cmd );
    semantics_cmd->add_option( "--mode", sf.mode )->check( CLI::IsMember( modes ) );
    semantics_cmd->add_flag( "--upgrades", sf.upgrades );
    semantics_cmd->add_option( "--state", sf.state );
    semantics_cmd->add_option( "--condition", sf.condition );
    semantics_cmd->add_option( "--depth", sf.depth, "Words shorter than this (default |X||K|+1)" );
    semantics_cmd->add_option( "--method", sf.method )->check( CLI::IsMember( { "fixpoint", "direct" } ) );

    std::string mode = "lang";
    bool upgrades = false;
    std::vector< std::string > pair;
    std::optional< std::string > condition;
    auto* equiv_cmd = app.add_subcommand( "equiv", "Decide conditional equivalence of two states" );
    add_file( equiv_cmd );
    equiv_cmd->add_option( "--mode", mode )->check( CLI::IsMember( modes ) );
    equiv_cmd->add_flag( "--upgrades", upgrades );
    equiv_cmd->add_option( "--pair", pair )->expected( 2 )->required();
    equiv_cmd->add_option( "--condition", condition );

    std::optional< std::size_t > depth;
    auto* coincide_cmd = app.add_subcommand( "coincide", "Compare the fixpoint and closed-form semantics" );
    add_file( coincide_cmd );
    coincide_cmd->add_option( "--mode", mode )->check( CLI::IsMember( modes ) );
    coincide_cmd->add_flag( "--upgrades", upgrades );
    coincide_cmd->add_option( "--depth", depth );

    std::string suite;
    std::size_t size_bound = 3;
    std::uint64_t seed = 0;
    auto* laws_cmd = app.add_subcommand( "laws", "Run a law suite" );
    laws_cmd->add_option( "--suite", suite )
        ->required()
        ->check( CLI::IsMember( { "monads", "kleisli", "dlaw", "quantale" } ) );
    laws_cmd->add_option( "--size-bound", size_bound );
    laws_cmd->add_option( "--seed", seed );

    std::size_t carrier_size = 2;
    auto* show_cmd = app.add_subcommand( "dlaw-show", "Tabulate the distributive law on small carriers" );
    show_cmd->add_option( "--carrier-size", carrier_size );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::CallForHelp& e )
    {
        return app.exit( e );
    }
    catch ( const CLI::ParseError& e )
    {
        app.exit( e );
        return 2;
    }

    try
    {
        report r;
        if ( laws_cmd->parsed() )
            r = cmd_laws( suite, size_bound, seed );
        else if ( show_cmd->parsed() )
            r = cmd_dlaw_show( carrier_size );
        else
        {
            if ( ( semantics_cmd->parsed() && sf.mode == "fail" && sf.upgrades )
                 || ( !semantics_cmd->parsed() && mode == "fail" && upgrades ) )
                throw usage_error( "--mode fail cannot be combined with --upgrades: refusal sets are not "
                                   "down-closed in the conditions" );
            std::optional< loaded > in;
            try
            {
                in = load( file );
            }
            catch ( const error& e )
            {
                throw usage_error( ( file == "-" ? std::string( "<stdin>" ) : file ) + ": " + e.what() );
            }
            if ( validate_cmd->parsed() )
                r = cmd_validate( *in );
            else if ( complete_cmd->parsed() )
                r = cmd_complete( *in );
            else if ( semantics_cmd->parsed() )
                r = cmd_semantics( *in, sf );
            else if ( equiv_cmd->parsed() )
                r = cmd_equiv( *in, mode, upgrades, pair, condition );
            else
                r = cmd_coincide( *in, mode, upgrades, depth );
        }
        if ( as_json )
            render_json( r, std::cout );
        else if ( complete_cmd->parsed() )
            std::cout << r.extra[ "document" ].get< std::string >();
        else
            render_text( r, std::cout );
        return r.exit_code;
    }
    catch ( const usage_error& e )
    {
        std::cerr << "error: " << e.what() << "\n";
    }
    catch ( const error& e )
    {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 2;
}
