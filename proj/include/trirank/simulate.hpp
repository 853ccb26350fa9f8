#pragma once

#include "trirank/entry_dist.hpp"
#include "trirank/partition.hpp"
#include "trirank/theory.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace trirank {

struct ExperimentConfig {
    u64 p = 2;
    int d = 1;
    std::size_t n = 0;
    u64 trials = 0;
    /// Empty means ζ = {-log_p n} ("derived" policy).
    std::optional<double> zeta;
    EntryDist dist = EntryDist::uniform(2, 1);
    u64 seed = 0;
    /// 0 selects the default d + 8, lowered if needed to keep p^E < 2^62.
    int precision = 0;
    std::size_t workers = 0;
    double budget = 1e12;
};

/// Default precision for a run: d + 8, capped so that p^E < 2^62.
int default_precision(u64 p, int d);

struct FluctuationHistogram {
    u64 p = 2;
    int d = 1;
    std::size_t n = 0;
    double zeta = 0;
    std::string zeta_policy = "explicit";
    u64 trials = 0;
    u64 seed = 0;
    int precision = 0;
    std::string dist;
    std::int64_t centering = 0;
    /// centered vector (rank(p^{i-1}Γ) - centering)_{i=1..d} -> count
    std::map<std::vector<std::int64_t>, u64> counts;

    friend bool operator==(const FluctuationHistogram&, const FluctuationHistogram&) = default;
};

FluctuationHistogram run_experiment(const ExperimentConfig& cfg);

struct PointRow {
    std::int64_t x = 0;
    double empirical = 0;
    double theory = 0;
    friend bool operator==(const PointRow&, const PointRow&) = default;
};

struct MomentRow {
    Partition lambda;
    double empirical = 0;
    double std_error = 0;
    double theory = 0;
    double median_of_means = 0;
    friend bool operator==(const MomentRow&, const MomentRow&) = default;
};

struct FitReport {
    TheoryParams params;
    bool has_pmf = false;
    double tv = 0;
    double chi2 = 0;
    int dof = 0;
    double chi2_pvalue = 1;
    std::vector<PointRow> points;
    std::vector<MomentRow> moments;
};

/// Total variation and tail-merged Pearson chi-square against the d = 1 pmf.
FitReport compare_to_theory(const FluctuationHistogram& hist, const TheoryParams& params);

/// Empirical E p^{<X, λ>} with bootstrap standard errors (200 multinomial
/// resamples from `seed`) and a median-of-means over 10 groups.
std::vector<MomentRow> compare_moments(const FluctuationHistogram& hist, const TheoryParams& params,
                                       const std::vector<Partition>& lambdas, u64 seed);

/// TV distance of two pmfs given on the same integer grid.
double total_variation(const std::map<std::int64_t, double>& a, const std::map<std::int64_t, double>& b);

} // namespace trirank
