#pragma once

#include "ctsem/finite_order.hpp"
#include "ctsem/law_report.hpp"
#include "ctsem/monads.hpp"

#include <functional>

namespace ctsem
{

/// Extensional Kleisli arrow X -> T Y: one T-value per domain element.
/// In the Pos backend every value is down-closed and the table is monotone
/// (x <= x' implies f(x) is a subset of f(x')); both are checked on construction.
class kl_arrow
{
    backend _backend = backend::set;
    poset_ptr _dom;
    poset_ptr _cod;
    std::vector< bits > _table;

public:
    kl_arrow( backend b, poset_ptr dom, poset_ptr cod, std::vector< bits > table );

    [[nodiscard]] backend get_backend() const { return _backend; }
    [[nodiscard]] monad_kind monad() const { return monad_of( _backend ); }
    [[nodiscard]] const poset_ptr& dom() const { return _dom; }
    [[nodiscard]] const poset_ptr& cod() const { return _cod; }
    [[nodiscard]] const bits& operator()( std::size_t x ) const { return _table[ x ]; }
    [[nodiscard]] const std::vector< bits >& table() const { return _table; }
    [[nodiscard]] std::string str() const;

    friend bool operator==( const kl_arrow& a, const kl_arrow& b )
    {
        return a._backend == b._backend && a._table == b._table && same_poset( a._dom, b._dom )
               && same_poset( a._cod, b._cod );
    }
    friend bool operator!=( const kl_arrow& a, const kl_arrow& b ) { return !( a == b ); }
};

[[nodiscard]] kl_arrow kl_identity( backend b, const poset_ptr& x );
// unit . f
[[nodiscard]] kl_arrow kl_pure( backend b, const mapping& f, const poset_ptr& dom, const poset_ptr& cod );
// (g . f)(x) = mult (T g (f x)); throws backend_mismatch / carrier_mismatch.
[[nodiscard]] kl_arrow kl_compose( const kl_arrow& g, const kl_arrow& f );
[[nodiscard]] bool kl_order( const kl_arrow& f, const kl_arrow& g );
[[nodiscard]] kl_arrow kl_join( const std::vector< kl_arrow >& arrows );
[[nodiscard]] kl_arrow kl_bottom( backend b, const poset_ptr& dom, const poset_ptr& cod );
// [f, g] : X + Y -> Z
[[nodiscard]] kl_arrow kl_copair( const kl_arrow& f, const kl_arrow& g );

/// Every Kleisli arrow dom -> T cod (monotone downset-valued ones in Pos).
/// Throws carrier_too_large beyond `limit` arrows.
[[nodiscard]] std::vector< kl_arrow > all_kl_arrows( backend b, const poset_ptr& dom, const poset_ptr& cod,
                                                     std::size_t limit = std::size_t{ 1 } << 20 );
/// Join-generators: the least arrow sending d to a value containing c, for
/// every domain element d and codomain element c. Every arrow is the join of
/// the generators below it.
[[nodiscard]] std::vector< kl_arrow > kl_generators( backend b, const poset_ptr& dom, const poset_ptr& cod );

// The functor G = K x _ on objects, with the carriers it produces cached.
struct rel_space
{
    poset_ptr cond;
    poset_ptr base;
    poset_ptr g; // cond x base, pairs (k, x)

    [[nodiscard]] std::size_t index( std::size_t k, std::size_t x ) const { return k * base->size() + x; }
};

[[nodiscard]] rel_space make_rel_space( const poset_ptr& cond, const poset_ptr& base );

/// Arrow X -> Y of the Kleisli category of the relative monad T . G, stored as
/// the Kleisli arrow G X -> T G Y.
class relkl_arrow
{
    rel_space _dom;
    rel_space _cod;
    kl_arrow _arrow;

public:
    relkl_arrow( rel_space dom, rel_space cod, kl_arrow arrow );
    // Table indexed by (k, x) -> subset of K x Y.
    static relkl_arrow make( backend b, const rel_space& dom, const rel_space& cod, std::vector< bits > table );

    [[nodiscard]] backend get_backend() const { return _arrow.get_backend(); }
    [[nodiscard]] const rel_space& dom() const { return _dom; }
    [[nodiscard]] const rel_space& cod() const { return _cod; }
    [[nodiscard]] const poset_ptr& cond() const { return _dom.cond; }
    [[nodiscard]] const kl_arrow& arrow() const { return _arrow; }
    [[nodiscard]] const bits& operator()( std::size_t k, std::size_t x ) const { return _arrow( _dom.index( k, x ) ); }
    [[nodiscard]] std::string str() const { return _arrow.str(); }

    friend bool operator==( const relkl_arrow& a, const relkl_arrow& b ) { return a._arrow == b._arrow; }
    friend bool operator!=( const relkl_arrow& a, const relkl_arrow& b ) { return !( a == b ); }
};

// g . f, computed as the extension of g (mult . T g) after f.
[[nodiscard]] relkl_arrow relkl_compose( const relkl_arrow& g, const relkl_arrow& f );
// (k, x) -> unit (k, x)
[[nodiscard]] relkl_arrow relkl_id( backend b, const rel_space& x );
// L f = unit . G f
[[nodiscard]] relkl_arrow embed_pure( backend b, const mapping& f, const rel_space& dom, const rel_space& cod );
[[nodiscard]] std::vector< relkl_arrow > all_relkl_arrows( backend b, const rel_space& dom, const rel_space& cod,
                                                           std::size_t limit = std::size_t{ 1 } << 20 );
[[nodiscard]] std::vector< relkl_arrow > relkl_generators( backend b, const rel_space& dom, const rel_space& cod );

/// The machine functor B = A x _ + O: a discrete alphabet and an observation
/// carrier (a poset in the Pos backend).
struct machine_shape
{
    fin_set alphabet;
    poset_ptr observations;
};

// A X = alphabet x X, pairs (a, x).
[[nodiscard]] poset_ptr a_object( const machine_shape& shape, const poset_ptr& x );
// B X = A X + O, tagged left/right.
[[nodiscard]] poset_ptr b_object( const machine_shape& shape, const poset_ptr& x );
// A f and B f on plain mappings.
[[nodiscard]] mapping a_map( const machine_shape& shape, const mapping& f, std::size_t x_size, std::size_t y_size );
[[nodiscard]] mapping b_map( const machine_shape& shape, const mapping& f, std::size_t x_size, std::size_t y_size );

/// Carriers of X, A X and B X under G, precomputed once per object.
struct machine_space
{
    machine_shape shape;
    rel_space x;
    rel_space ax;
    rel_space bx;

    // Index of inl(a, x) in B X, of inr(o) in B X, of (a, x) in A X.
    [[nodiscard]] std::size_t b_left( std::size_t a, std::size_t xi ) const { return a * x.base->size() + xi; }
    [[nodiscard]] std::size_t b_right( std::size_t o ) const { return shape.alphabet.size() * x.base->size() + o; }
    [[nodiscard]] std::size_t a_index( std::size_t a, std::size_t xi ) const { return a * x.base->size() + xi; }
};

[[nodiscard]] machine_space make_machine_space( const machine_shape& shape, const poset_ptr& cond, const poset_ptr& x );

/// B-bar f on Kl(T): (a, x) -> {(a, y) | y in f x}, o -> unit o.
[[nodiscard]] kl_arrow machine_lift_bar( const machine_shape& shape, const kl_arrow& f );
/// A-tilde f on Kl(T . G): (k, (a, x)) -> {(k', (a, y)) | (k', y) in f (k, x)}.
[[nodiscard]] relkl_arrow lift_a_tilde( const machine_space& src, const machine_space& dst, const relkl_arrow& f );
[[nodiscard]] relkl_arrow lift_a_tilde( const machine_shape& shape, const relkl_arrow& f );
/// B-hat f on Kl(T . G): the A-tilde action on left summands and the unit on
/// observations, (k, inr o) -> unit (k, inr o).
[[nodiscard]] relkl_arrow lift_b_hat( const machine_space& src, const machine_space& dst, const relkl_arrow& f );
[[nodiscard]] relkl_arrow lift_b_hat( const machine_shape& shape, const relkl_arrow& f );

/// Category laws of Kl(T) over the given carriers: identities, associativity,
/// left strictness, monotonicity and join-continuity of composition.
[[nodiscard]] law_report check_kleisli_laws( backend b, const std::vector< poset_ptr >& carriers );
/// Category laws of Kl(T . G) over the given state carriers and condition poset.
[[nodiscard]] law_report check_relkl_laws( backend b, const poset_ptr& cond, const std::vector< poset_ptr >& carriers );
/// Functoriality of B-hat and A-tilde, agreement with B and A on pure arrows,
/// monotonicity, join preservation, continuity on ascending chains and
/// exchange of joins with copairing.
[[nodiscard]] law_report check_lifting_theorems( backend b, const machine_shape& shape, const poset_ptr& cond,
                                                 const std::vector< poset_ptr >& carriers );

} // namespace ctsem
