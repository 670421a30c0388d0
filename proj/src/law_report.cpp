#include "ctsem/law_report.hpp"

#include <algorithm>

namespace ctsem
{

law_result& law_report::add( std::string name, std::string scope )
{
    law_result r;
    r.name = std::move( name );
    r.scope = std::move( scope );
    _laws.push_back( std::move( r ) );
    return _laws.back();
}

void law_report::append( const law_report& other, const std::string& prefix )
{
    for ( auto r : other._laws )
    {
        if ( !prefix.empty() )
            r.name = prefix + r.name;
        _laws.push_back( std::move( r ) );
    }
}

bool law_report::all_passed() const
{
    return std::all_of( _laws.begin(), _laws.end(), []( const law_result& r ) { return r.passed; } );
}

const law_result* law_report::find( const std::string& name ) const
{
    for ( const auto& r : _laws )
        if ( r.name == name )
            return &r;
    return nullptr;
}

std::string law_report::str() const
{
    std::string out;
    for ( const auto& r : _laws )
    {
        out += r.passed ? "PASS " : "FAIL ";
        out += r.name + " [" + std::to_string( r.instances ) + " instances, " + r.scope + "]";
        if ( r.counterexample )
            out += " witness: " + *r.counterexample;
        out += "\n";
    }
    return out;
}

} // namespace ctsem
