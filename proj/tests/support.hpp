#pragma once

#include "ctsem/finite_order.hpp"

#include <initializer_list>

namespace support
{

inline ctsem::bits subset( std::size_t n, std::initializer_list< std::size_t > members )
{
    ctsem::bits b( n );
    for ( auto i : members )
        b.set( i );
    return b;
}

inline ctsem::poset_ptr set_of( std::initializer_list< const char* > names )
{
    return ctsem::discrete( ctsem::fin_set::of_names( { names.begin(), names.end() } ) );
}

} // namespace support
