#pragma once

#include "ctsem/finite_order.hpp"
#include "ctsem/law_report.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <utility>

namespace ctsem
{

using rational = boost::multiprecision::cpp_rational;

[[nodiscard]] std::string to_string( const rational& r );

/// Element of [0, 1], exact.
class omega
{
    rational _v;

public:
    omega() = default;
    // Throws out_of_unit_interval.
    explicit omega( rational v );
    omega( long num, long den ) : omega( rational( num ) / den ) {}

    static omega zero() { return {}; }
    static omega one() { return omega( rational( 1 ) ); }

    [[nodiscard]] const rational& value() const { return _v; }
    [[nodiscard]] std::string str() const { return to_string( _v ); }

    friend bool operator==( const omega& a, const omega& b ) { return a._v == b._v; }
    friend bool operator!=( const omega& a, const omega& b ) { return a._v != b._v; }
    friend bool operator<( const omega& a, const omega& b ) { return a._v < b._v; }
    friend bool operator<=( const omega& a, const omega& b ) { return a._v <= b._v; }
};

// min(r + s, 1)
[[nodiscard]] omega oplus( const omega& r, const omega& s );
// Numeric infimum; the empty family gives 1.
[[nodiscard]] omega omega_inf( const std::vector< omega >& family );

/// Total map X -> Omega, X given by its size.
class omega_predicate
{
    std::vector< omega > _w;

public:
    omega_predicate() = default;
    explicit omega_predicate( std::vector< omega > weights ) : _w{ std::move( weights ) } {}
    static omega_predicate constant( std::size_t n, const omega& v ) { return omega_predicate( std::vector( n, v ) ); }

    [[nodiscard]] std::size_t size() const { return _w.size(); }
    [[nodiscard]] const omega& operator[]( std::size_t x ) const { return _w.at( x ); }
    [[nodiscard]] const std::vector< omega >& weights() const { return _w; }
    [[nodiscard]] std::string str() const;

    friend bool operator==( const omega_predicate& a, const omega_predicate& b ) { return a._w == b._w; }
    friend bool operator<( const omega_predicate& a, const omega_predicate& b ) { return a._w < b._w; }
};

// 0 at x, 1 elsewhere.
[[nodiscard]] omega_predicate pq_unit( std::size_t n, std::size_t x );
// T f (g) (y) = inf over f(x) = y of g(x)
[[nodiscard]] omega_predicate pq_map( const mapping& f, std::size_t cod_size, const omega_predicate& g );

/// Kleisli arrow X -> P_Omega Y as an Omega-valued matrix, one row per x.
using omega_matrix = std::vector< omega_predicate >;

[[nodiscard]] omega_matrix pq_kl_identity( std::size_t n );
// (g . f)(x)(z) = min over y of f(x)(y) (+) g(y)(z); throws carrier_mismatch.
[[nodiscard]] omega_matrix pq_kl_compose( const omega_matrix& g, const omega_matrix& f );

/// Element of P_Omega (P_Omega X) with finitely many values below 1.
class omega_predicate2
{
    std::size_t _n = 0;
    std::map< omega_predicate, omega > _w; // values below 1 only

public:
    omega_predicate2() = default;
    omega_predicate2( std::size_t n, const std::map< omega_predicate, omega >& weights );

    [[nodiscard]] std::size_t base_size() const { return _n; }
    [[nodiscard]] omega operator()( const omega_predicate& p ) const;
    [[nodiscard]] const std::map< omega_predicate, omega >& finite_part() const { return _w; }
    [[nodiscard]] std::string str() const;

    friend bool operator==( const omega_predicate2& a, const omega_predicate2& b )
    {
        return a._n == b._n && a._w == b._w;
    }
    friend bool operator<( const omega_predicate2& a, const omega_predicate2& b )
    {
        return std::tie( a._n, a._w ) < std::tie( b._n, b._w );
    }
};

// mult(G)(x) = inf over g of G(g) (+) g(x)
[[nodiscard]] omega_predicate pq_mult( const omega_predicate2& big );

/// Finitely supported distribution with exact positive weights summing to 1.
template < class K >
class dist
{
    std::map< K, rational > _w;

public:
    dist() = default;
    // Drops zero weights. Throws infeasible_mass on negative weights or a total other than 1.
    explicit dist( const std::map< K, rational >& weights );
    static dist point( const K& k ) { return dist( std::map< K, rational >{ { k, rational( 1 ) } } ); }

    [[nodiscard]] rational weight( const K& k ) const
    {
        auto it = _w.find( k );
        return it == _w.end() ? rational( 0 ) : it->second;
    }
    [[nodiscard]] const std::map< K, rational >& weights() const { return _w; }
    [[nodiscard]] std::size_t support_size() const { return _w.size(); }
    [[nodiscard]] auto begin() const { return _w.begin(); }
    [[nodiscard]] auto end() const { return _w.end(); }

    friend bool operator==( const dist& a, const dist& b ) { return a._w == b._w; }
    friend bool operator<( const dist& a, const dist& b ) { return a._w < b._w; }
};

template < class K >
dist< K >::dist( const std::map< K, rational >& weights )
{
    rational total = 0;
    for ( const auto& [ k, w ] : weights )
    {
        if ( w < 0 )
            throw infeasible_mass( "negative weight " + to_string( w ) );
        if ( w != 0 )
            _w.emplace( k, w );
        total += w;
    }
    if ( total != 1 )
        throw infeasible_mass( "weights sum to " + to_string( total ) );
}

// The distribution functor on arrows.
template < class K, class F >
auto push_forward( const dist< K >& d, F&& f )
{
    using L = std::decay_t< decltype( f( std::declval< const K& >() ) ) >;
    std::map< L, rational > out;
    for ( const auto& [ k, w ] : d )
        out[ f( k ) ] += w;
    return dist< L >( out );
}

template < class A, class B >
std::pair< dist< A >, dist< B > > marginals( const dist< std::pair< A, B > >& joint )
{
    std::map< A, rational > left;
    std::map< B, rational > right;
    for ( const auto& [ k, w ] : joint )
    {
        left[ k.first ] += w;
        right[ k.second ] += w;
    }
    return { dist< A >( left ), dist< B >( right ) };
}

using point_dist = dist< std::size_t >;
using predicate_dist = dist< omega_predicate >;

[[nodiscard]] std::string dist_str( const point_dist& d );
[[nodiscard]] std::string dist_str( const predicate_dist& d );

// Sum of p(x) mu(x); throws carrier_mismatch.
[[nodiscard]] omega expectation_lift( const omega_predicate& p, const point_dist& mu );

/// Balanced transportation problem. The optimum is a vertex of the polytope,
/// found by the primal transportation simplex with Bland's rule.
struct transport_result
{
    rational value;
    std::vector< std::vector< rational > > flow;
    std::size_t pivots = 0;
};

// Throws infeasible_mass if supplies and demands do not balance.
[[nodiscard]] transport_result solve_transport( const std::vector< rational >& supply,
                                                const std::vector< rational >& demand,
                                                const std::vector< std::vector< rational > >& cost );

// Bound on the support of either distribution fed to the coupling solver.
inline constexpr std::size_t max_coupling_support = 6;

struct coupling_result
{
    omega value;
    dist< std::pair< omega_predicate, std::size_t > > coupling;
};

/// inf over couplings w of (M, mu) of the sum of p(x) w(p, x).
/// Throws carrier_too_large beyond max_coupling_support.
[[nodiscard]] coupling_result optimal_coupling( const predicate_dist& big_m, const point_dist& mu );
[[nodiscard]] omega optimal_coupling_value( const predicate_dist& big_m, const point_dist& mu );

/// The law component at M, D P_Omega X -> P_Omega D X, as a query with a memo.
class theta_quantale
{
    predicate_dist _m;
    mutable std::map< point_dist, omega > _memo;

public:
    explicit theta_quantale( predicate_dist m ) : _m{ std::move( m ) } {}
    [[nodiscard]] omega operator()( const point_dist& mu ) const;
    [[nodiscard]] const predicate_dist& argument() const { return _m; }
};

struct registered_mapping
{
    mapping f;
    std::size_t cod_size = 0;
};

/// Finite probe universe for the law checks. The target probes of a mapping
/// are the push-forwards of `probes` plus the point masses of its codomain.
struct quantale_probes
{
    std::size_t carrier = 0;
    std::vector< point_dist > probes;
    std::vector< point_dist > unit_inputs;            // mu, for the unit triangle
    std::vector< predicate_dist > predicates;         // M, for naturality
    std::vector< dist< omega_predicate2 > > nested;   // second-order M, for the pentagon
    std::vector< registered_mapping > mappings;
};

/// Unit triangle, multiplication pentagon and naturality, at the probes only.
/// The infima hidden in mult and T vartheta range over infinitely many
/// intermediate distributions; they are evaluated at candidate intermediates,
/// always including the one glued from the left-hand side's optimal coupling.
[[nodiscard]] law_report check_quantale_laws( const quantale_probes& u );

} // namespace ctsem
