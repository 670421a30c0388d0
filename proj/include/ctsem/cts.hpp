#pragma once

#include "ctsem/kleisli.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>

namespace ctsem
{

struct transition
{
    std::size_t from = 0;
    std::size_t action = 0;
    std::size_t cond = 0;
    std::size_t to = 0;

    friend auto operator<=>( const transition&, const transition& ) = default;
};

/// Conditional transition system. Transitions are kept sorted and unique;
/// down-closure in the conditions is not enforced here (see validate).
class cts
{
    poset_ptr _conditions;
    fin_set _alphabet;
    fin_set _states;
    std::vector< transition > _transitions;
    bits _accepting;
    std::vector< bits > _succ; // ((k * |X|) + x) * |A| + a -> successors

public:
    // Throws dangling_reference on out-of-range indices.
    cts( poset_ptr conditions, fin_set alphabet, fin_set states, std::vector< transition > transitions,
         bits accepting );

    // By names; throws dangling_reference naming the unknown element.
    static cts from_names( poset_ptr conditions, const std::vector< std::string >& alphabet,
                           const std::vector< std::string >& states, const std::vector< std::string >& accepting,
                           const std::vector< std::array< std::string, 4 > >& transitions );

    [[nodiscard]] const poset_ptr& conditions() const { return _conditions; }
    [[nodiscard]] const fin_set& alphabet() const { return _alphabet; }
    [[nodiscard]] const fin_set& states() const { return _states; }
    [[nodiscard]] const std::vector< transition >& transitions() const { return _transitions; }
    [[nodiscard]] const bits& accepting() const { return _accepting; }
    [[nodiscard]] bool is_accepting( std::size_t x ) const { return _accepting[ x ]; }

    [[nodiscard]] const bits& successors( std::size_t x, std::size_t a, std::size_t k ) const
    {
        return _succ[ ( k * _states.size() + x ) * _alphabet.size() + a ];
    }
    // Actions enabled at x under k, as a bitmask over the alphabet.
    [[nodiscard]] std::uint64_t ready( std::size_t x, std::size_t k ) const;
    [[nodiscard]] std::uint64_t all_actions() const;

    friend bool operator==( const cts& a, const cts& b );
};

// Missing down-closure instances (x, a, k', y), k' < k, in canonical order.
[[nodiscard]] std::vector< transition > validate( const cts& c );
[[nodiscard]] cts complete( const cts& c );

enum class observation_kind { acceptance, ready, failure };

[[nodiscard]] const char* to_string( observation_kind k );

class observation_mode
{
    observation_kind _kind = observation_kind::acceptance;
    bool _upgrades = false;

public:
    // Throws failure_with_upgrades: refusal sets are not down-closed in the
    // conditions, so failure observations have no downset model.
    explicit observation_mode( observation_kind kind, bool upgrades = false );

    [[nodiscard]] observation_kind kind() const { return _kind; }
    [[nodiscard]] bool upgrades() const { return _upgrades; }
    [[nodiscard]] backend get_backend() const { return _upgrades ? backend::pos : backend::set; }
};

/// Observation carrier O: a single "accept" mark, or the subsets of the
/// alphabet (ordered by inclusion in the Pos backend).
struct observation_space
{
    observation_kind kind = observation_kind::acceptance;
    poset_ptr carrier;
    std::vector< std::uint64_t > subsets; // carrier index -> action bitmask
    std::map< std::uint64_t, std::size_t > index;

    [[nodiscard]] std::size_t size() const { return carrier->size(); }
};

// Bound on |alphabet| for ready and failure observations (2^6 subsets).
inline constexpr std::size_t max_observed_actions = 6;

[[nodiscard]] observation_space make_observation_space( const observation_mode& mode, const fin_set& alphabet );

/// The coalgebra X -> B X in the Kleisli category of T . G, with the carriers
/// it lives on.
struct cts_coalgebra
{
    observation_mode mode;
    observation_space obs;
    machine_space space;
    relkl_arrow alpha;
};

[[nodiscard]] cts_coalgebra build_alpha( const cts& c, const observation_mode& mode );

/// Word over the alphabet, encoded in bijective base (|A| + 1): letters are
/// digits 1..|A|, so shortlex order is (length, code).
struct word
{
    std::uint64_t code = 0;
    std::uint32_t length = 0;

    friend auto operator<=>( const word&, const word& ) = default;
};

[[nodiscard]] word append( const word& w, std::size_t a, std::size_t letters );
[[nodiscard]] word prepend( std::size_t a, const word& w, std::size_t letters );
[[nodiscard]] std::vector< std::size_t > spell( const word& w, std::size_t letters );
[[nodiscard]] word make_word( const std::vector< std::size_t >& as, std::size_t letters );
// Longest word the encoding holds over an alphabet of the given size.
[[nodiscard]] std::size_t max_word_length( std::size_t letters );
// "eps" for the empty word; letters joined, with '.' between multi-character names.
[[nodiscard]] std::string word_str( const word& w, const fin_set& alphabet );
[[nodiscard]] std::string subset_mask_str( std::uint64_t m, const fin_set& alphabet );

/// L(x, k) up to max_len, by breadth-first search of the k-slice.
[[nodiscard]] std::vector< word > direct_language( const cts& c, std::size_t x, std::size_t k, std::size_t max_len );
/// Ready pairs (w, U), U ranging over every subset of an endpoint's ready set.
[[nodiscard]] std::vector< std::pair< word, std::uint64_t > > direct_ready( const cts& c, std::size_t x, std::size_t k,
                                                                            std::size_t max_len );
/// Failure pairs (w, U), U ranging over every subset of an endpoint's refusals.
[[nodiscard]] std::vector< std::pair< word, std::uint64_t > > direct_failure( const cts& c, std::size_t x,
                                                                              std::size_t k, std::size_t max_len );

/// Behaviour cells indexed by (k, x); each entry is a word with the set of
/// (final condition k', observation o) decorating it, as bit k' * |O| + o.
struct decorated_behaviour
{
    std::size_t conditions = 0;
    std::size_t states = 0;
    std::size_t observations = 0;
    std::vector< std::vector< std::pair< word, std::uint64_t > > > cells;
    bool stabilized = false;
    std::size_t iterations = 0;

    [[nodiscard]] const std::vector< std::pair< word, std::uint64_t > >& cell( std::size_t k, std::size_t x ) const
    {
        return cells[ k * states + x ];
    }
    [[nodiscard]] std::size_t trace_count() const;
};

[[nodiscard]] inline std::size_t default_depth( const cts& c )
{
    return c.states().size() * c.conditions()->size() + 1;
}

/// The depth-th iterate of f |-> L(h) . B-hat(f) . alpha from bottom. Flags
/// stabilization when some unfolding up to the (depth + 1)-th changes nothing,
/// stopping there.
/// Throws carrier_too_large if |conditions| * |O| > 64 or words outgrow the encoding.
[[nodiscard]] decorated_behaviour fixpoint_traces( const cts_coalgebra& alpha, std::size_t depth );

/// The closed form the coincidence theorems predict, truncated to |w| < depth,
/// computed from the direct semantics.
[[nodiscard]] decorated_behaviour closed_form_traces( const cts& c, const observation_mode& mode, std::size_t depth );

/// Cellwise equality of the fixpoint iterate and the truncated closed form.
[[nodiscard]] law_report coincidence_check( const cts& c, const observation_mode& mode, std::size_t depth );

struct equiv_witness
{
    std::size_t condition = 0;
    word w;
    std::optional< std::uint64_t > observation; // action subset; empty for acceptance
    bool first_has = true;                      // the observation is in the first state's behaviour
};

struct equiv_verdict
{
    bool equivalent = true;
    std::optional< equiv_witness > witness;
    std::size_t det_states = 0; // largest determinised product explored over the conditions
};

/// Exact decision for every k' <= at_condition (every condition if absent):
/// subset construction on the k'-slice, Moore refinement on the labelled
/// determinised automaton, and a breadth-first shortest witness.
[[nodiscard]] equiv_verdict behaviour_equiv( const cts& c, const observation_mode& mode, std::size_t x, std::size_t y,
                                             std::optional< std::size_t > at_condition = std::nullopt );

struct refusal_violation
{
    std::size_t k = 0;
    std::size_t x = 0;
    std::size_t lower = 0;     // k' <= k
    std::uint64_t refused = 0; // refused at k, not at k'
};

[[nodiscard]] std::optional< refusal_violation > refusal_downclosure_witness( const cts& c );

struct random_cts_params
{
    std::size_t max_states = 5;
    std::size_t max_conditions = 3;
    std::size_t max_actions = 2;
    // Each (x, a, k, y) is drawn with probability 1 / density before completion.
    std::size_t density = 6;
    bool discrete_conditions = false;
};

/// Seeded random CTS, down-closed by construction.
[[nodiscard]] cts random_cts( std::uint64_t seed, const random_cts_params& params = {} );

// The two worked examples.
[[nodiscard]] cts example_e1();
[[nodiscard]] cts example_e2();

} // namespace ctsem
