#pragma once

#include "ctsem/dlaw.hpp"
#include "ctsem/transport.hpp"

#include <cstdint>

namespace ctsem
{

// Law-check universes: discrete carriers in Set, every poset up to
// isomorphism in Pos, sizes 1..max_size.
[[nodiscard]] std::vector< poset_ptr > law_carriers( backend b, std::size_t max_size );

/// Broken predicate liftings for the mutation harness. Each keeps the fibre
/// structure (results are up-closed) but breaks the lifting on some component.
[[nodiscard]] std::vector< predicate_lifting > sigma_mutants();

// Unit and associativity for powerset and downset on carriers up to size_bound.
[[nodiscard]] law_report monad_suite( std::size_t size_bound );
// Category, Cppo and lifting laws; carriers up to min(size_bound, 2), conditions up to 2 elements
// (two-element conditions with the largest carriers only).
[[nodiscard]] law_report kleisli_suite( std::size_t size_bound );
// Distributive laws of the standard lifting for A and B, lifting preservation,
// Beck-Chevalley on the lambda squares, and the non-pullback control square.
[[nodiscard]] law_report dlaw_suite( std::size_t size_bound );

/// Seeded probe universe on a carrier of the given size: `probe_count` random
/// distributions plus the point masses.
[[nodiscard]] quantale_probes random_quantale_probes( std::size_t carrier, std::uint64_t seed,
                                                      std::size_t probe_count = 20 );
[[nodiscard]] law_report quantale_suite( std::size_t size_bound, std::uint64_t seed );

} // namespace ctsem
