#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace ctsem
{

struct law_result
{
    std::string name;
    bool passed = true;
    std::optional< std::string > counterexample;
    std::size_t instances = 0; // number of equations actually compared
    std::string scope;         // what was enumerated, e.g. "exhaustive" or "at 20 probes"
};

class law_report
{
    std::deque< law_result > _laws;

public:
    law_result& add( std::string name, std::string scope = "exhaustive" );
    void append( const law_report& other, const std::string& prefix = {} );

    [[nodiscard]] const std::deque< law_result >& laws() const { return _laws; }
    [[nodiscard]] bool all_passed() const;
    [[nodiscard]] const law_result* find( const std::string& name ) const;
    [[nodiscard]] std::string str() const;
};

// Records one compared instance on `r`; the first failure keeps its witness.
// `witness` is a callable producing the description, evaluated only on failure.
template < class Witness >
void record( law_result& r, bool ok, Witness&& witness )
{
    ++r.instances;
    if ( !ok && r.passed )
    {
        r.passed = false;
        r.counterexample = std::string( witness() );
    }
}

inline void record( law_result& r, bool ok )
{
    record( r, ok, [] { return std::string{}; } );
}

} // namespace ctsem
