#pragma once

#include "trirank/modular.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace trirank {

/// Trials are grouped into fixed blocks; block results are merged in block
/// order, so the outcome does not depend on how many workers ran them.
inline constexpr u64 kTrialBlock = 1024;

/// requested > 0 wins; otherwise TRIRANK_WORKERS, otherwise the hardware count.
std::size_t resolve_workers(std::size_t requested);

/// Mean and variance by Welford's update, with the pairwise merge of Chan et al.
struct RunningStats {
    u64 count = 0;
    double mean = 0;
    double m2 = 0;
    double max = -std::numeric_limits<double>::infinity();

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
        max = std::max(max, x);
    }
    void merge(const RunningStats& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double n = static_cast<double>(count) + static_cast<double>(o.count);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.count) / n;
        m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / n;
        count += o.count;
        max = std::max(max, o.max);
    }
    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double std_error() const { return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

/// Runs body(state, acc, trial) for every trial. Each worker owns one state
/// from make_state(); each block of kTrialBlock trials starts from `init` and
/// is folded into the result with merge(total, block) in block order.
template <class Acc, class MakeState, class Body, class Merge>
Acc run_trials(u64 trials, std::size_t workers, const Acc& init, MakeState make_state, Body body, Merge merge) {
    const u64 blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<std::optional<Acc>> results(blocks);
    std::atomic<u64> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        try {
            auto state = make_state();
            while (true) {
                const u64 b = next.fetch_add(1);
                if (b >= blocks) break;
                Acc acc = init;
                const u64 end = std::min(trials, (b + 1) * kTrialBlock);
                for (u64 t = b * kTrialBlock; t < end; ++t) body(state, acc, t);
                results[b].emplace(std::move(acc));
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(blocks);
        }
    };

    const std::size_t count = std::max<std::size_t>(1, std::min<std::size_t>(workers, blocks));
    if (count == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < count; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    Acc total = init;
    for (auto& r : results) merge(total, *r);
    return total;
}

} // namespace trirank
