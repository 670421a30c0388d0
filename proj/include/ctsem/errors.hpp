#pragma once

#include <stdexcept>
#include <string>

namespace ctsem
{

// Base of every error raised by the library. The CLI maps these to exit code 2.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define CTSEM_DECLARE_ERROR( name )              \
    class name : public error                    \
    {                                            \
    public:                                      \
        using error::error;                      \
    }

CTSEM_DECLARE_ERROR( antisymmetry_violation );
CTSEM_DECLARE_ERROR( not_down_closed );
CTSEM_DECLARE_ERROR( not_monotone );
CTSEM_DECLARE_ERROR( carrier_too_large );
CTSEM_DECLARE_ERROR( carrier_mismatch );
CTSEM_DECLARE_ERROR( backend_mismatch );
CTSEM_DECLARE_ERROR( closure_violation );
CTSEM_DECLARE_ERROR( not_commuting );
CTSEM_DECLARE_ERROR( failure_with_upgrades );
CTSEM_DECLARE_ERROR( dangling_reference );
CTSEM_DECLARE_ERROR( unknown_element );
CTSEM_DECLARE_ERROR( infeasible_mass );
CTSEM_DECLARE_ERROR( out_of_unit_interval );

#undef CTSEM_DECLARE_ERROR

// Parse errors carry the 1-based line they were found on.
class syntax_error : public error
{
    int _line;

public:
    syntax_error( int line, const std::string& what )
        : error( "line " + std::to_string( line ) + ": " + what ), _line{ line } {}

    [[nodiscard]] int line() const { return _line; }
};

} // namespace ctsem
