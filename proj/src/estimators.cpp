#include "trirank/estimators.hpp"

#include "trirank/errors.hpp"
#include "trirank/parallel.hpp"
#include "trirank/rng.hpp"
#include "trirank/streaming.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <fmt/format.h>

namespace trirank {

namespace {

constexpr double kAbsorbTolerance = 1e-16;
constexpr double kNegligibleMass = 1e-18;

// Expected Π_i p τ(v_{<=i}) given the nonzero values of v, averaging over
// where the zeros sit. Positions 2..n are zero with probability 1/p. Once
// p τ stays within kAbsorbTolerance of 1, deeper states only carry their
// mass along and are pooled.
class ConditionedChi0 {
public:
    ConditionedChi0(const CharacterTable& table, std::size_t n) : acc_(table), n_(n), p_(table.order()) {}

    double run(Rng& rng, std::size_t& depth) {
        std::uniform_int_distribution<u64> nonzero(1, p_ - 1);
        const double pd = static_cast<double>(p_);
        const double stay = 1.0 / pd;
        const double move = (pd - 1) / pd;
        acc_.reset();
        f_.assign(2, 0.0);
        g_.assign(2, 0.0);
        f_[1] = pd * acc_.push(nonzero(rng));
        g_[1] = f_[1];
        std::size_t top = 1;
        std::size_t boundary = 0; // states >= boundary are pooled once set
        int quiet = std::fabs(f_[1] - 1) < kAbsorbTolerance ? 1 : 0;
        double pooled = 0;
        for (std::size_t i = 2; i <= n_; ++i) {
            if (boundary != 0) {
                const double inflow = g_[boundary - 1] * move;
                for (std::size_t k = boundary - 1; k >= 2; --k) g_[k] = f_[k] * (g_[k] * stay + g_[k - 1] * move);
                g_[1] = f_[1] * g_[1] * stay;
                pooled += inflow;
                // what is left below the boundary can no longer move the total
                double rest = 0;
                for (std::size_t k = 1; k < boundary; ++k) rest += g_[k];
                if (rest < kNegligibleMass * pooled) break;
                continue;
            }
            f_.push_back(pd * acc_.push(nonzero(rng)));
            g_.push_back(f_[top + 1] * g_[top] * move);
            for (std::size_t k = top; k >= 2; --k) g_[k] = f_[k] * (g_[k] * stay + g_[k - 1] * move);
            g_[1] = f_[1] * g_[1] * stay;
            ++top;
            quiet = std::fabs(f_[top] - 1) < kAbsorbTolerance ? quiet + 1 : 0;
            if (quiet >= 3) {
                boundary = top;
                pooled = g_[top];
            }
        }
        double total = pooled;
        const std::size_t last = boundary != 0 ? boundary - 1 : top;
        for (std::size_t k = 1; k <= last; ++k) total += g_[k];
        depth = boundary != 0 ? boundary : top;
        return total;
    }

private:
    TauAccumulator acc_;
    std::size_t n_;
    u64 p_;
    std::vector<double> f_;
    std::vector<double> g_;
};

double plain_chi0_sample(TauAccumulator& acc, u64 p, std::size_t n, Rng& rng) {
    std::uniform_int_distribution<u64> nonzero(1, p - 1);
    std::uniform_int_distribution<u64> any(0, p - 1);
    const double pd = static_cast<double>(p);
    acc.reset();
    double prod = pd * acc.push(nonzero(rng));
    for (std::size_t i = 2; i <= n; ++i) prod *= pd * acc.push(any(rng));
    return prod;
}

struct Chi0Acc {
    RunningStats stats;
    double depth_sum = 0;
};

} // namespace

double simulation_cost(u64 p, std::size_t n, u64 trials) {
    const double per = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(trials);
    return p == 2 ? per / 64 : per;
}

void check_budget(u64 p, std::size_t n, u64 trials, double budget) {
    const double cost = simulation_cost(p, n, trials);
    if (cost > budget) {
        throw ResourceError(fmt::format("estimated {:.3g} entry-operations exceed the budget of {:.3g}", cost, budget));
    }
}

EstimateResult estimate_chi0(const EntryDist& dist, std::size_t n, u64 trials, u64 seed, Chi0Method method,
                             std::size_t workers) {
    require(dist.precision() == 1, "chi0 depends only on xi mod p; give the entry law with precision 1");
    require(n >= 1, "n must be positive");
    require(trials >= 2, "at least two trials are needed for a standard error");
    const u64 p = dist.p();
    const CharacterTable table(dist, Partition({1}));
    const double scale = static_cast<double>(p - 1) / static_cast<double>(p);

    Chi0Acc total;
    if (method == Chi0Method::conditioned && p == 2) {
        // the only nonzero residue is 1, so every trial computes the same number
        ConditionedChi0 run(table, n);
        Rng rng = make_stream(seed, 0);
        std::size_t depth = 0;
        const double v = run.run(rng, depth);
        total.stats.count = trials;
        total.stats.mean = v;
        total.stats.max = v;
        total.depth_sum = static_cast<double>(depth) * static_cast<double>(trials);
    } else if (method == Chi0Method::conditioned) {
        total = run_trials(
            trials, resolve_workers(workers), Chi0Acc{}, [&] { return ConditionedChi0(table, n); },
            [&](ConditionedChi0& run, Chi0Acc& acc, u64 t) {
                Rng rng = make_stream(seed, t);
                std::size_t depth = 0;
                acc.stats.add(run.run(rng, depth));
                acc.depth_sum += static_cast<double>(depth);
            },
            [](Chi0Acc& a, const Chi0Acc& b) {
                a.stats.merge(b.stats);
                a.depth_sum += b.depth_sum;
            });
    } else {
        total = run_trials(
            trials, resolve_workers(workers), Chi0Acc{}, [&] { return TauAccumulator(table); },
            [&](TauAccumulator& acc, Chi0Acc& out, u64 t) {
                Rng rng = make_stream(seed, t);
                out.stats.add(plain_chi0_sample(acc, p, n, rng));
            },
            [](Chi0Acc& a, const Chi0Acc& b) { a.stats.merge(b.stats); });
    }

    EstimateResult r;
    r.estimate = scale * total.stats.mean;
    r.std_error = scale * total.stats.std_error();
    r.trials = trials;
    r.n = n;
    r.seed = seed;
    r.diagnostics["method_plain"] = method == Chi0Method::plain ? 1.0 : 0.0;
    r.diagnostics["max_over_mean"] = total.stats.mean > 0 ? total.stats.max / total.stats.mean : 0.0;
    if (method == Chi0Method::conditioned) {
        r.diagnostics["mean_absorption_depth"] = total.depth_sum / static_cast<double>(trials);
    }
    return r;
}

double exact_moment_symmetric(u64 p, double alpha, std::size_t n, bool first_nonzero) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    require(alpha > 0 && alpha < 1, fmt::format("alpha = {} must lie in (0, 1)", alpha));
    require(n >= 1, "n must be positive");
    require(n <= 100000, "exact_moment_symmetric is quadratic in n; n is capped at 10^5");
    using R = long double;
    const R pp = static_cast<R>(p);
    const R r = (pp * static_cast<R>(alpha) - 1) / (pp - 1);

    // τ of a prefix with k nonzero coordinates is β_k / p; β_0 = p
    std::vector<R> beta{pp};
    std::size_t boundary = 0; // β_k == 1 to working precision for k >= boundary
    for (R rk = r; beta.size() <= n; rk *= r) {
        const R b = 1 + (pp - 1) * rk;
        beta.push_back(b);
        if (std::fabs(static_cast<double>(b - 1)) < 1e-19) {
            boundary = beta.size() - 1;
            break;
        }
    }

    std::vector<R> g(1, 1);
    R pooled = 0;
    std::size_t top = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        const bool pool = boundary != 0 && top + 1 >= boundary;
        const std::size_t hi = pool ? boundary - 1 : top + 1;
        if (pool) {
            pooled += g[boundary - 1] * (pp - 1) / pp;
        } else {
            g.push_back(0);
        }
        for (std::size_t k = hi; k >= 1; --k) {
            const R keep = (k <= top && !(i == 1 && first_nonzero)) ? g[k] : 0;
            g[k] = beta[k] / pp * (keep + (pp - 1) * g[k - 1]);
        }
        g[0] = (i == 1 && first_nonzero) ? 0 : g[0];
        top = hi;
    }
    R total = pooled;
    for (const R x : g) total += x;
    return static_cast<double>(total);
}

EstimateResult estimate_hom_moment(const EntryDist& dist, const Partition& group, std::size_t n, u64 trials,
                                   u64 seed, std::size_t workers, double budget) {
    require(n >= 1, "n must be positive");
    require(trials >= 2, "at least two trials are needed for a standard error");
    EstimateResult r;
    r.trials = trials;
    r.n = n;
    r.seed = seed;
    if (group.empty()) {
        r.estimate = 1;
        return r;
    }
    const u64 p = dist.p();
    check_budget(p, n, trials, budget);
    const EntryDist law = dist.at_precision(group.largest());
    const double log_p = std::log(static_cast<double>(p));
    const double log_norm = static_cast<double>(group.size()) * std::log(static_cast<double>(n));

    const RunningStats stats = stream_kernel_orders(
        law, n, trials, seed, resolve_workers(workers), RunningStats{},
        [&](RunningStats& acc, u64, const std::vector<int>& orders) {
            // |Hom(Z/p^a, G)| = p^{Σ_j min(a, μ_j)}; order k stands for every a >= k
            long exponent = 0;
            for (int a : orders) {
                for (int part : group.parts()) exponent += std::min(a, part);
            }
            acc.add(std::exp(static_cast<double>(exponent) * log_p - log_norm));
        },
        [](RunningStats& a, const RunningStats& b) { a.merge(b); });

    r.estimate = stats.mean;
    r.std_error = stats.std_error();
    r.diagnostics["max_over_mean"] = stats.mean > 0 ? stats.max / stats.mean : 0.0;
    r.diagnostics["precision"] = group.largest();
    return r;
}

} // namespace trirank
