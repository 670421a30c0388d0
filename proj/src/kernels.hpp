#pragma once

// Storage-generic cell kernels shared by the public arrow types (dynamic
// bitsets) and the law checkers (64-bit masks over small carriers).

#include "ctsem/finite_order.hpp"

#include <bit>
#include <cstdint>

namespace ctsem::detail
{

using mask = std::uint64_t;

inline void set_bit( bits& s, std::size_t i ) { s.set( i ); }
inline void set_bit( mask& s, std::size_t i ) { s |= mask{ 1 } << i; }
inline bool test_bit( const bits& s, std::size_t i ) { return s[ i ]; }
inline bool test_bit( mask s, std::size_t i ) { return ( s >> i ) & 1U; }
inline bool is_subset( const bits& a, const bits& b ) { return a.is_subset_of( b ); }
inline bool is_subset( mask a, mask b ) { return ( a & ~b ) == 0; }

template < class F >
void for_each_bit( const bits& s, F&& f )
{
    for ( auto i = s.find_first(); i != bits::npos; i = s.find_next( i ) )
        f( i );
}

template < class F >
void for_each_bit( mask s, F&& f )
{
    while ( s )
    {
        f( static_cast< std::size_t >( std::countr_zero( s ) ) );
        s &= s - 1;
    }
}

inline mask to_mask( const bits& s )
{
    mask m = 0;
    for_each_bit( s, [ & ]( std::size_t i ) { set_bit( m, i ); } );
    return m;
}

inline bits to_bits( mask m, std::size_t n )
{
    bits s( n );
    for_each_bit( m, [ & ]( std::size_t i ) { s.set( i ); } );
    return s;
}

// out[x] = union of g[y] over y in f[x]. In both backends this is the Kleisli
// extension: a union of down-closed values is down-closed.
template < class V, class S = typename V::value_type >
V compose_cells( const V& g, const V& f, const S& zero )
{
    V out( f.size(), zero );
    for ( std::size_t x = 0; x < f.size(); ++x )
        for_each_bit( f[ x ], [ & ]( std::size_t y ) { out[ x ] |= g[ y ]; } );
    return out;
}

/// Cell-by-cell recipe for a lifted arrow: each domain cell either transports
/// one cell of the argument through an index translation, or is a constant.
struct lift_plan
{
    std::size_t cod_size = 0;
    std::vector< std::ptrdiff_t > source;         // argument cell, or -1 for a constant cell
    std::vector< std::size_t > translation;       // index into translations
    std::vector< std::vector< std::size_t > > translations;
    std::vector< std::vector< std::size_t > > constants; // bits of constant cells
};

template < class V, class S = typename V::value_type >
V apply_plan( const lift_plan& plan, const V& f, const S& zero )
{
    V out( plan.source.size(), zero );
    for ( std::size_t c = 0; c < plan.source.size(); ++c )
    {
        if ( plan.source[ c ] < 0 )
        {
            for ( auto i : plan.constants[ c ] )
                set_bit( out[ c ], i );
            continue;
        }
        const auto& tr = plan.translations[ plan.translation[ c ] ];
        for_each_bit( f[ static_cast< std::size_t >( plan.source[ c ] ) ],
                      [ & ]( std::size_t i ) { set_bit( out[ c ], tr[ i ] ); } );
    }
    return out;
}

} // namespace ctsem::detail
