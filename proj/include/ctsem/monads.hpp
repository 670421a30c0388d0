#pragma once

#include "ctsem/finite_order.hpp"
#include "ctsem/law_report.hpp"

#include <functional>
#include <map>

namespace ctsem
{

// Set backend: powerset monad on sets. Pos backend: downset monad on posets.
enum class backend { set, pos };
enum class monad_kind { powerset, downset };

[[nodiscard]] inline monad_kind monad_of( backend b )
{
    return b == backend::set ? monad_kind::powerset : monad_kind::downset;
}

[[nodiscard]] const char* to_string( backend b );

// T-values are subsets of the base carrier. The downset operations verify
// down-closure of their inputs and monotonicity of mapped functions.

[[nodiscard]] bits p_unit( std::size_t n, std::size_t x );
[[nodiscard]] bits p_mult( std::size_t n, const std::vector< bits >& family );
[[nodiscard]] bits p_map( const mapping& f, std::size_t cod_size, const bits& s );

[[nodiscard]] bits pd_unit( const fin_poset& p, std::size_t x );
[[nodiscard]] bits pd_mult( const fin_poset& p, const std::vector< bits >& family );
[[nodiscard]] bits pd_map( const mapping& f, const fin_poset& dom, const fin_poset& cod, const bits& s );

// Kind-dispatching forms used by the Kleisli layer.
[[nodiscard]] bits t_unit( monad_kind m, const fin_poset& p, std::size_t x );
[[nodiscard]] bits t_map( monad_kind m, const mapping& f, const fin_poset& dom, const fin_poset& cod, const bits& s );
[[nodiscard]] bool is_t_value( monad_kind m, const fin_poset& p, const bits& s );

/// T applied to a finite carrier: every T-value enumerated, with the carrier
/// of T X as a poset (inclusion order for downsets, discrete for powerset).
class t_object
{
    monad_kind _kind;
    poset_ptr _base;
    std::vector< bits > _elems;
    std::map< bits, std::size_t > _index;
    poset_ptr _carrier;

public:
    t_object( monad_kind kind, poset_ptr base );

    [[nodiscard]] monad_kind kind() const { return _kind; }
    [[nodiscard]] const poset_ptr& base() const { return _base; }
    [[nodiscard]] const poset_ptr& carrier() const { return _carrier; }
    [[nodiscard]] std::size_t size() const { return _elems.size(); }
    [[nodiscard]] const bits& at( std::size_t i ) const { return _elems.at( i ); }
    [[nodiscard]] const std::vector< bits >& elements() const { return _elems; }
    // Throws not_down_closed for a downset monad if `s` is not a T-value.
    [[nodiscard]] std::size_t index_of( const bits& s ) const;
};

// Bound on the number of T-values of T X handled by enumeration (|T T X| <= 2^16).
inline constexpr std::size_t max_t_values = 16;

/// Unit and multiplication as replaceable functions, so that law checkers can
/// be exercised against deliberately broken instances.
struct monad_instance
{
    monad_kind kind = monad_kind::powerset;
    std::function< bits( const fin_poset&, std::size_t ) > unit;
    std::function< bits( const fin_poset&, const std::vector< bits >& ) > mult;
};

[[nodiscard]] monad_instance standard_monad( monad_kind kind );

/// Left/right unit and associativity checked by enumeration of T X and T T X.
/// Associativity is compared on every element of T T T X when |T T X| <= 16;
/// beyond that on the unit images of T T X, which generate T T T X under
/// unions, and both sides of the law preserve unions.
[[nodiscard]] law_report check_monad_laws( const monad_instance& m, const poset_ptr& carrier );

} // namespace ctsem
