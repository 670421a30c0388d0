#pragma once

#include "ctsem/kleisli.hpp"

#include <functional>

namespace ctsem
{

/// Element of the fibre over a carrier: any subset in the Set backend, an
/// up-closed subset in the Pos backend (verified on construction).
class predicate
{
    backend _backend = backend::set;
    poset_ptr _carrier;
    bits _members;

public:
    predicate( backend b, poset_ptr carrier, bits members );

    [[nodiscard]] backend get_backend() const { return _backend; }
    [[nodiscard]] const poset_ptr& carrier() const { return _carrier; }
    [[nodiscard]] const bits& members() const { return _members; }
    [[nodiscard]] std::string str() const { return subset_str( _carrier->carrier(), _members ); }

    friend bool operator==( const predicate& a, const predicate& b )
    {
        return a._backend == b._backend && a._members == b._members && same_poset( a._carrier, b._carrier );
    }
};

// The involution I: identity in Set, the dual poset in Pos.
[[nodiscard]] poset_ptr involution( backend b, const poset_ptr& y );

/// Predicate over X x I Y. In Pos: up-closed in X, down-closed in Y.
class relation
{
    backend _backend = backend::set;
    poset_ptr _left;
    poset_ptr _right;
    poset_ptr _pairs; // left x I right
    bits _members;

public:
    relation( backend b, poset_ptr left, poset_ptr right, bits members );

    [[nodiscard]] backend get_backend() const { return _backend; }
    [[nodiscard]] const poset_ptr& left() const { return _left; }
    [[nodiscard]] const poset_ptr& right() const { return _right; }
    [[nodiscard]] const poset_ptr& pairs() const { return _pairs; }
    [[nodiscard]] const bits& members() const { return _members; }
    [[nodiscard]] bool contains( std::size_t x, std::size_t y ) const { return _members[ x * _right->size() + y ]; }
    [[nodiscard]] predicate as_predicate() const { return { _backend, _pairs, _members }; }
    [[nodiscard]] std::string str() const;

    friend bool operator==( const relation& a, const relation& b )
    {
        return a._backend == b._backend && a._members == b._members && same_poset( a._left, b._left )
               && same_poset( a._right, b._right );
    }
};

[[nodiscard]] relation theta( const kl_arrow& f );
// Throws closure_violation in Pos if r is not a valid relation (cannot happen
// for relations built through the constructor, which verifies closure).
[[nodiscard]] kl_arrow theta_inv( const relation& r );

// Preimage along f : dom -> p.carrier().
[[nodiscard]] predicate reindex( const mapping& f, const poset_ptr& dom, const predicate& p );
// Image along f : p.carrier() -> cod; up-closed in Pos. Throws not_monotone.
[[nodiscard]] predicate direct_image( const mapping& f, const predicate& p, const poset_ptr& cod );

// Membership relation over T X x I X, the image of id_{TX} under theta.
[[nodiscard]] relation membership( backend b, const poset_ptr& x );
// Identity relation, the image of the unit under theta.
[[nodiscard]] relation delta( backend b, const poset_ptr& x );
// theta (theta_inv s . theta_inv r)
[[nodiscard]] relation rel_compose( const relation& s, const relation& r );
// {(x, z) | exists y. x r y and y s z}
[[nodiscard]] relation relational_compose( const relation& s, const relation& r );

enum class functor_kind { identity, a, b };

/// Identity, A = alphabet x _ or B = alphabet x _ + O on finite carriers.
struct finite_functor
{
    functor_kind kind = functor_kind::identity;
    machine_shape shape;

    [[nodiscard]] poset_ptr on_obj( const poset_ptr& x ) const;
    [[nodiscard]] mapping on_arr( const mapping& f, std::size_t x_size, std::size_t y_size ) const;
    [[nodiscard]] std::size_t obj_size( std::size_t x_size ) const;
    [[nodiscard]] std::string name() const;
};

[[nodiscard]] finite_functor identity_functor();
[[nodiscard]] finite_functor a_functor( const fin_set& alphabet );
[[nodiscard]] finite_functor b_functor( const fin_set& alphabet, const poset_ptr& observations );

// <F pr_X, F pr_Y> : F(X x Y) -> F X x F Y, as indices into product(F X, F Y).
[[nodiscard]] mapping lambda_map( const finite_functor& f, std::size_t x_size, std::size_t y_size );

/// Fibrewise map Phi X -> Phi (F X).
struct predicate_lifting
{
    std::string name;
    std::function< predicate( const finite_functor&, const predicate& ) > apply;
};

// sigma(U) = alphabet x U, plus every observation for B.
[[nodiscard]] predicate_lifting standard_predicate_lifting();

using relation_lifting = std::function< relation( const relation& ) >;

// exists_lambda . sigma, on a relation between X and Y.
[[nodiscard]] relation relation_lift( const predicate_lifting& sigma, const finite_functor& f, const relation& r );
[[nodiscard]] relation_lifting make_relation_lifting( const predicate_lifting& sigma, const finite_functor& f );

/// theta_inv (lift (membership X)) : F T X -> T F X, as a Kleisli arrow.
[[nodiscard]] kl_arrow build_dlaw( const relation_lifting& lift, backend b, const poset_ptr& x );

using dlaw_family = std::function< kl_arrow( const poset_ptr& ) >;

/// Naturality along every (monotone) mapping between the carriers, the unit
/// triangle and the multiplication pentagon.
[[nodiscard]] law_report check_kl_law( const dlaw_family& vartheta, const finite_functor& f, backend b,
                                       const std::vector< poset_ptr >& carriers );
/// Preservation of identity relations and relational composition, on every
/// relation between the carriers; also compares rel_compose with plain
/// relational composition.
[[nodiscard]] law_report check_lifting_preserves( const relation_lifting& lift, const finite_functor& f, backend b,
                                                  const std::vector< poset_ptr >& carriers );
/// (F g)* . sigma = sigma . g* for every (monotone) mapping between the carriers.
[[nodiscard]] law_report check_predicate_lifting( const predicate_lifting& sigma, const finite_functor& f, backend b,
                                                  const std::vector< poset_ptr >& carriers );

/// Commuting square  x -f-> y -k-> w  =  x -g-> z -h-> w.
struct square
{
    backend b = backend::set;
    poset_ptr x, y, z, w;
    mapping f, g, k, h;
    std::string label;
};

// k* . exists_h = exists_f . g* on every predicate over z. Throws not_commuting.
[[nodiscard]] law_report check_beck_chevalley( const square& s );
[[nodiscard]] bool is_weak_pullback( const square& s );

// The square F(x x I y) -lambda-> F x x I F y over F(f x I y), for f : x -> x2.
[[nodiscard]] square lambda_square( const finite_functor& fun, backend b, const mapping& f, const poset_ptr& x,
                                    const poset_ptr& x2, const poset_ptr& y );
// A commuting square that is not a weak pullback: {p} into two 2-element sets,
// both mapped constantly to a point.
[[nodiscard]] square counterexample_square();

} // namespace ctsem
