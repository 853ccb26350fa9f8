#pragma once

#include "trirank/modular.hpp"

#include <iosfwd>

namespace trirank {

struct SelftestOptions {
    int snf_matrices = 200;
    int tau_vectors = 200;
    u64 seed = 1;
};

/// Runs the brute-force oracle suite (MC, Hom counts, Smith valuations, τ,
/// coranks), printing one PASS/FAIL line per check. Returns the number of
/// failed checks.
int run_selftest(std::ostream& out, const SelftestOptions& options = {});

} // namespace trirank
