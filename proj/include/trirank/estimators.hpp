#pragma once

#include "trirank/entry_dist.hpp"
#include "trirank/partition.hpp"

#include <cstddef>
#include <map>
#include <string>

namespace trirank {

/// Monte Carlo return value. std_error is the sample standard deviation of
/// the per-trial values over sqrt(trials).
struct EstimateResult {
    double estimate = 0;
    double std_error = 0;
    u64 trials = 0;
    std::size_t n = 0;
    u64 seed = 0;
    std::map<std::string, double> diagnostics;
};

enum class Chi0Method {
    /// Samples only the nonzero values of v and integrates over the positions
    /// of the zeros exactly; same mean as `plain`, far smaller variance.
    conditioned,
    /// One uniform v with v_1 != 0 per trial, value (p-1)/p Π_i p τ(v_{<=i}).
    plain,
};

/// E|{v ∈ F_p^n : v_1 != 0, L_n v = 0}|, which tends to χ₀ as n grows.
/// Requires a law given mod p (precision 1).
EstimateResult estimate_chi0(const EntryDist& dist, std::size_t n, u64 trials, u64 seed,
                             Chi0Method method = Chi0Method::conditioned, std::size_t workers = 0);

/// E|{v ∈ F_p^n : L_n v = 0}| exactly (up to rounding) for the symmetric law,
/// by a recursion over the number of nonzero coordinates; includes v = 0.
/// With first_nonzero, only vectors with v_1 != 0 are counted.
double exact_moment_symmetric(u64 p, double alpha, std::size_t n, bool first_nonzero = false);

/// E|Hom(Γ_n, G)| / n^{|G|} from sampled matrices, with |Hom| read off the
/// cokernel type computed at precision p^{largest part of G}.
EstimateResult estimate_hom_moment(const EntryDist& dist, const Partition& group, std::size_t n, u64 trials,
                                   u64 seed, std::size_t workers = 0, double budget = 1e12);

/// Entry-operation cost of `trials` matrices of size n; p = 2 counts 1/64 per entry.
double simulation_cost(u64 p, std::size_t n, u64 trials);
void check_budget(u64 p, std::size_t n, u64 trials, double budget);

} // namespace trirank
