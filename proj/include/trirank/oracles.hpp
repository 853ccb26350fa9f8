#pragma once

// Slow reference implementations that share no code with the fast paths.
// Used by the selftest subcommand and by the test suites.

#include "trirank/entry_dist.hpp"
#include "trirank/pgroup.hpp"
#include "trirank/plinalg.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace trirank {

/// Smith normal form of an integer matrix over Z by gcd row/column
/// operations on big integers. Returns v_p of each invariant factor, with
/// zero factors and valuations >= cap reported as CokernelType::kInfinite,
/// sorted ascending.
std::vector<int> integer_smith_valuations(std::vector<std::vector<BigInt>> a, u64 p, int cap);

/// invariant_valuations computed through integer_smith_valuations on the
/// integer lift of the entries.
CokernelType exact_cokernel_type(const TriMatrix& m);

/// P(Σ ξ_i v_i = 0) in G_λ by convolving the law of ξ v_i one term at a time.
double tau_by_convolution(const EntryDist& dist, const Partition& group, std::span<const std::size_t> v);

/// A law mod p^E with extra mass on multiples of p, so that random matrices
/// have nontrivial higher valuations.
EntryDist valuation_heavy_law(u64 p, int precision);

} // namespace trirank
