#pragma once

#include "ctsem/errors.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ctsem
{

using bits = boost::dynamic_bitset<>;

/// Structured atom. Every element of every carrier in the library is a value:
/// plain names, pairs (products), tagged summands (coproducts) and finite sets
/// (elements of T X). Values are totally ordered, which fixes the canonical
/// element order of every carrier built from them.
class value
{
public:
    enum class kind { atom, pair, left, right, set };

private:
    kind _kind = kind::atom;
    std::string _name;
    std::vector< value > _parts;

    value( kind k, std::string name, std::vector< value > parts )
        : _kind{ k }, _name{ std::move( name ) }, _parts{ std::move( parts ) } {}

public:
    value() = default;

    static value atom( std::string name );
    static value pair( value first, value second );
    static value left( value inner );
    static value right( value inner );
    // Members are sorted and deduplicated.
    static value set( std::vector< value > members );

    [[nodiscard]] kind get_kind() const { return _kind; }
    [[nodiscard]] const std::string& name() const { return _name; }
    [[nodiscard]] const std::vector< value >& parts() const { return _parts; }
    [[nodiscard]] const value& first() const { return _parts.at( 0 ); }
    [[nodiscard]] const value& second() const { return _parts.at( 1 ); }
    [[nodiscard]] const value& inner() const { return _parts.at( 0 ); }

    [[nodiscard]] std::string str() const;

    friend bool operator==( const value& a, const value& b );
    friend bool operator<( const value& a, const value& b );
    friend bool operator!=( const value& a, const value& b ) { return !( a == b ); }
};

/// Finite set of distinct values kept in canonical (sorted) order.
class fin_set
{
    std::vector< value > _elems;
    std::map< value, std::size_t > _index;

public:
    fin_set() = default;
    explicit fin_set( std::vector< value > elems );

    static fin_set of_names( const std::vector< std::string >& names );

    [[nodiscard]] std::size_t size() const { return _elems.size(); }
    [[nodiscard]] const value& at( std::size_t i ) const { return _elems.at( i ); }
    [[nodiscard]] const std::vector< value >& elements() const { return _elems; }
    [[nodiscard]] bool contains( const value& v ) const { return _index.count( v ) != 0; }
    // Throws unknown_element.
    [[nodiscard]] std::size_t index_of( const value& v ) const;
    [[nodiscard]] std::size_t index_of_name( const std::string& name ) const
    {
        return index_of( value::atom( name ) );
    }

    friend bool operator==( const fin_set& a, const fin_set& b ) { return a._elems == b._elems; }
};

class fin_poset;
using poset_ptr = std::shared_ptr< const fin_poset >;

/// Finite poset stored as a full order matrix. Rows are kept in both
/// directions so up- and down-closures are single unions.
class fin_poset
{
    fin_set _carrier;
    std::vector< bits > _up;   // _up[i] = { j | i <= j }
    std::vector< bits > _down; // _down[i] = { j | j <= i }

    fin_poset( fin_set carrier, std::vector< bits > up );

    // For orders that are partial orders by construction (products, duals, ...).
    static poset_ptr trusted( fin_set carrier, std::vector< bits > up );

    friend poset_ptr dual( const poset_ptr& p );
    friend poset_ptr product( const poset_ptr& p, const poset_ptr& q );
    friend poset_ptr coproduct( const poset_ptr& p, const poset_ptr& q );

public:
    // Reflexive-transitive closure of `pairs` (given as (lower, upper) indices).
    // Throws antisymmetry_violation.
    static poset_ptr closure( fin_set carrier, const std::vector< std::pair< std::size_t, std::size_t > >& pairs );
    static poset_ptr discrete( fin_set carrier );
    // `leq[i][j]` must already be a partial order; verified.
    static poset_ptr from_matrix( fin_set carrier, const std::vector< bits >& leq );

    [[nodiscard]] const fin_set& carrier() const { return _carrier; }
    [[nodiscard]] std::size_t size() const { return _carrier.size(); }
    [[nodiscard]] const value& at( std::size_t i ) const { return _carrier.at( i ); }
    [[nodiscard]] std::size_t index_of( const value& v ) const { return _carrier.index_of( v ); }
    [[nodiscard]] bool leq( std::size_t i, std::size_t j ) const { return _up[ i ][ j ]; }
    [[nodiscard]] const bits& up_set( std::size_t i ) const { return _up[ i ]; }
    [[nodiscard]] const bits& down_set( std::size_t i ) const { return _down[ i ]; }
    [[nodiscard]] bool is_discrete() const;
    [[nodiscard]] bits empty_subset() const { return bits( size() ); }
    [[nodiscard]] bits full_subset() const { return ~bits( size() ); }
    // The generating pairs (i, j), i < j in the order, i != j.
    [[nodiscard]] std::vector< std::pair< std::size_t, std::size_t > > strict_pairs() const;

    friend bool operator==( const fin_poset& a, const fin_poset& b )
    {
        return a._carrier == b._carrier && a._up == b._up;
    }
};

[[nodiscard]] bool same_poset( const poset_ptr& a, const poset_ptr& b );

[[nodiscard]] poset_ptr dual( const poset_ptr& p );
// Elements are value::pair(x, y); componentwise order; x-major index order.
[[nodiscard]] poset_ptr product( const poset_ptr& p, const poset_ptr& q );
// Elements are value::left(x) followed by value::right(y); summands incomparable.
[[nodiscard]] poset_ptr coproduct( const poset_ptr& p, const poset_ptr& q );
[[nodiscard]] poset_ptr discrete( const fin_set& s );

[[nodiscard]] inline std::size_t product_index( const poset_ptr& q, std::size_t i, std::size_t j )
{
    return i * q->size() + j;
}

[[nodiscard]] bits down_close( const fin_poset& p, const bits& s );
[[nodiscard]] bits up_close( const fin_poset& p, const bits& s );
[[nodiscard]] bool is_down_closed( const fin_poset& p, const bits& s );
[[nodiscard]] bool is_up_closed( const fin_poset& p, const bits& s );

/// Total function between carriers, stored as an index table.
using mapping = std::vector< std::size_t >;

[[nodiscard]] bool is_monotone( const mapping& f, const fin_poset& p, const fin_poset& q );
[[nodiscard]] mapping identity_mapping( std::size_t n );
// (g . f)
[[nodiscard]] mapping compose( const mapping& g, const mapping& f );

// Every subset of an n-element set, in bitmask order. n <= 20.
[[nodiscard]] std::vector< bits > all_subsets( std::size_t n );
[[nodiscard]] std::vector< bits > all_down_closed( const fin_poset& p );
[[nodiscard]] std::vector< bits > all_up_closed( const fin_poset& p );
// Every total function from an m-set into an n-set, lexicographic order.
[[nodiscard]] std::vector< mapping > all_mappings( std::size_t m, std::size_t n );
[[nodiscard]] std::vector< mapping > all_monotone( const fin_poset& p, const fin_poset& q );

[[nodiscard]] std::string subset_str( const fin_set& carrier, const bits& s );

/// Every partial order on `n` labelled points, one per isomorphism class.
[[nodiscard]] std::vector< poset_ptr > posets_up_to_iso( std::size_t n );
/// Chain with element names given bottom first.
[[nodiscard]] poset_ptr chain( const std::vector< std::string >& bottom_first );

} // namespace ctsem
