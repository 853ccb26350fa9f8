#include "trirank/simulate.hpp"

#include "trirank/errors.hpp"
#include "trirank/estimators.hpp"
#include "trirank/parallel.hpp"
#include "trirank/rng.hpp"
#include "trirank/streaming.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

namespace trirank {

namespace {

using Counts = std::map<std::vector<std::int64_t>, u64>;

constexpr int kBootstrapResamples = 200;
constexpr int kMomGroups = 10;
constexpr double kMinExpected = 5.0;
constexpr std::int64_t kPmfMargin = 30;

struct Bin {
    double observed = 0;
    double expected = 0;
};

void merge_into(std::vector<Bin>& bins, std::size_t from, std::size_t to) {
    bins[to].observed += bins[from].observed;
    bins[to].expected += bins[from].expected;
    bins.erase(bins.begin() + static_cast<std::ptrdiff_t>(from));
}

} // namespace

int default_precision(u64 p, int d) {
    int e = d + 8;
    u64 unused = 0;
    while (e > d + 1 && !checked_pow(p, e, u64{1} << 62, unused)) --e;
    return e;
}

FluctuationHistogram run_experiment(const ExperimentConfig& cfg) {
    require(is_prime(cfg.p), fmt::format("p = {} is not prime", cfg.p));
    require(cfg.dist.p() == cfg.p, "entry law and p disagree");
    require(cfg.d >= 1, "d must be positive");
    require(cfg.n >= 1, "n must be positive");
    require(cfg.trials >= 1, "trials must be positive");
    const int precision = cfg.precision > 0 ? cfg.precision : default_precision(cfg.p, cfg.d);
    require(cfg.d + 1 <= precision, fmt::format("precision E = {} must be at least d + 1 = {}", precision, cfg.d + 1));
    (void)Modulus(cfg.p, precision);
    if (cfg.zeta) require(*cfg.zeta >= 0 && *cfg.zeta < 1, fmt::format("zeta = {} must lie in [0, 1)", *cfg.zeta));
    check_budget(cfg.p, cfg.n, cfg.trials, cfg.budget);

    FluctuationHistogram h;
    h.p = cfg.p;
    h.d = cfg.d;
    h.n = cfg.n;
    h.zeta = cfg.zeta ? *cfg.zeta : zeta_from_n(cfg.p, cfg.n);
    h.zeta_policy = cfg.zeta ? "explicit" : "derived";
    h.trials = cfg.trials;
    h.seed = cfg.seed;
    h.precision = precision;
    h.dist = cfg.dist.describe();
    h.centering = centering(cfg.p, cfg.n, h.zeta);

    // rank(p^{i-1}Γ) for i <= d only sees the entries mod p^d
    const EntryDist law = cfg.dist.at_precision(cfg.d);
    const int d = cfg.d;
    const std::int64_t shift = h.centering;
    h.counts = stream_kernel_orders(
        law, cfg.n, cfg.trials, cfg.seed, resolve_workers(cfg.workers), Counts{},
        [&](Counts& acc, u64, const std::vector<int>& orders) {
            std::vector<std::int64_t> key(static_cast<std::size_t>(d), 0);
            for (int a : orders) {
                for (int i = 1; i <= std::min(a, d); ++i) ++key[static_cast<std::size_t>(i - 1)];
            }
            for (auto& x : key) x -= shift;
            ++acc[key];
        },
        [](Counts& a, const Counts& b) {
            for (const auto& [k, c] : b) a[k] += c;
        });
    return h;
}

double total_variation(const std::map<std::int64_t, double>& a, const std::map<std::int64_t, double>& b) {
    double tv = 0;
    for (const auto& [x, pa] : a) {
        auto it = b.find(x);
        tv += std::fabs(pa - (it == b.end() ? 0.0 : it->second));
    }
    for (const auto& [x, pb] : b) {
        if (!a.contains(x)) tv += std::fabs(pb);
    }
    return tv / 2;
}

FitReport compare_to_theory(const FluctuationHistogram& hist, const TheoryParams& params) {
    require(hist.d == 1, "no closed-form pmf for d >= 2; use compare_moments");
    require(hist.p == params.p, "histogram and theory use different p");
    require(hist.trials > 0 && !hist.counts.empty(), "histogram is empty");

    FitReport report;
    report.params = params;
    report.has_pmf = true;

    const double trials = static_cast<double>(hist.trials);
    const std::int64_t lo = hist.counts.begin()->first.at(0) - kPmfMargin;
    const std::int64_t hi = hist.counts.rbegin()->first.at(0) + kPmfMargin;
    std::map<std::int64_t, double> emp;
    for (const auto& [key, c] : hist.counts) emp[key.at(0)] = static_cast<double>(c) / trials;

    double window_mass = 0;
    double abs_diff = 0;
    std::vector<Bin> bins;
    for (std::int64_t x = lo; x <= hi; ++x) {
        const double th = pmf_L1(params.p, params.chi, x);
        const double e = emp.contains(x) ? emp[x] : 0.0;
        window_mass += th;
        abs_diff += std::fabs(e - th);
        if (e > 0 || th > 1e-12) report.points.push_back({x, e, th});
        bins.push_back({e * trials, th * trials});
    }
    const double outside = std::max(0.0, 1.0 - window_mass);
    report.tv = (abs_diff + outside) / 2;

    // tail-merge until every bin expects at least kMinExpected counts
    bins.back().expected += outside * trials;
    while (bins.size() > 1 && bins.front().expected < kMinExpected) merge_into(bins, 0, 1);
    while (bins.size() > 1 && bins.back().expected < kMinExpected) merge_into(bins, bins.size() - 1, bins.size() - 2);
    for (std::size_t i = 0; i < bins.size() && bins.size() > 1;) {
        if (bins[i].expected >= kMinExpected) {
            ++i;
            continue;
        }
        if (i + 1 < bins.size()) {
            merge_into(bins, i + 1, i);
        } else {
            merge_into(bins, i, i - 1);
        }
    }
    double chi2 = 0;
    for (const auto& b : bins) {
        if (b.expected > 0) chi2 += (b.observed - b.expected) * (b.observed - b.expected) / b.expected;
    }
    report.chi2 = chi2;
    report.dof = static_cast<int>(bins.size()) - 1;
    report.chi2_pvalue = report.dof > 0 ? boost::math::gamma_q(report.dof / 2.0, chi2 / 2.0) : 1.0;
    return report;
}

std::vector<MomentRow> compare_moments(const FluctuationHistogram& hist, const TheoryParams& params,
                                       const std::vector<Partition>& lambdas, u64 seed) {
    require(hist.p == params.p, "histogram and theory use different p");
    require(hist.trials > 0, "histogram is empty");
    for (const auto& l : lambdas) {
        require(l.length() <= static_cast<std::size_t>(hist.d),
                fmt::format("lambda = ({}) has more than d = {} parts", l.to_string(), hist.d));
    }
    const double log_p = std::log(static_cast<double>(hist.p));
    std::vector<std::vector<std::int64_t>> keys;
    std::vector<double> weights;
    for (const auto& [k, c] : hist.counts) {
        keys.push_back(k);
        weights.push_back(static_cast<double>(c));
    }
    const std::size_t m = keys.size();
    const double trials = static_cast<double>(hist.trials);

    // value[l][j] = p^{<x_j, λ_l>}
    std::vector<std::vector<double>> value(lambdas.size(), std::vector<double>(m));
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        for (std::size_t j = 0; j < m; ++j) {
            double dot = 0;
            for (std::size_t i = 0; i < lambdas[l].length(); ++i) dot += static_cast<double>(keys[j][i] * lambdas[l][i]);
            value[l][j] = std::exp(dot * log_p);
        }
    }

    std::vector<MomentRow> rows(lambdas.size());
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        rows[l].lambda = lambdas[l];
        rows[l].theory = moment_Ld(params.p, params.chi, lambdas[l]);
        double s = 0;
        for (std::size_t j = 0; j < m; ++j) s += weights[j] * value[l][j];
        rows[l].empirical = s / trials;
    }

    // bootstrap: multinomial resamples of the histogram by sequential binomials
    Rng boot = make_stream(seed, 0xb0075u);
    std::vector<RunningStats> spread(lambdas.size());
    std::vector<u64> resampled(m);
    for (int b = 0; b < kBootstrapResamples; ++b) {
        u64 left = hist.trials;
        double mass_left = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double pj = weights[j] / trials;
            if (j + 1 == m || left == 0) {
                resampled[j] = left;
            } else {
                const double q = std::clamp(pj / mass_left, 0.0, 1.0);
                resampled[j] = std::binomial_distribution<u64>(left, q)(boot);
            }
            left -= resampled[j];
            mass_left -= pj;
        }
        for (std::size_t l = 0; l < lambdas.size(); ++l) {
            double s = 0;
            for (std::size_t j = 0; j < m; ++j) s += static_cast<double>(resampled[j]) * value[l][j];
            spread[l].add(s / trials);
        }
    }
    for (std::size_t l = 0; l < lambdas.size(); ++l) rows[l].std_error = std::sqrt(spread[l].variance());

    // median of means: every observation joins one of kMomGroups groups
    // uniformly at random, so each bin splits multinomially across groups
    // and the sample never has to be expanded
    if (hist.trials >= static_cast<u64>(kMomGroups)) {
        Rng split = make_stream(seed, 0x3e0u);
        std::vector<double> size(kMomGroups, 0.0);
        std::vector<std::vector<double>> sums(lambdas.size(), std::vector<double>(kMomGroups, 0.0));
        for (std::size_t j = 0; j < m; ++j) {
            u64 left = hist.counts.at(keys[j]);
            for (int g = 0; g < kMomGroups && left > 0; ++g) {
                const u64 take = g + 1 == kMomGroups
                                     ? left
                                     : std::binomial_distribution<u64>(left, 1.0 / (kMomGroups - g))(split);
                left -= take;
                size[g] += static_cast<double>(take);
                for (std::size_t l = 0; l < lambdas.size(); ++l) sums[l][g] += static_cast<double>(take) * value[l][j];
            }
        }
        for (std::size_t l = 0; l < lambdas.size(); ++l) {
            std::vector<double> means;
            for (int g = 0; g < kMomGroups; ++g) {
                if (size[g] > 0) means.push_back(sums[l][g] / size[g]);
            }
            std::sort(means.begin(), means.end());
            const std::size_t k = means.size();
            rows[l].median_of_means = k % 2 == 1 ? means[k / 2] : (means[k / 2 - 1] + means[k / 2]) / 2;
        }
    } else {
        for (auto& r : rows) r.median_of_means = r.empirical;
    }
    return rows;
}

} // namespace trirank
