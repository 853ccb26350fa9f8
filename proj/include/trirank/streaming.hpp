#pragma once

#include "trirank/entry_dist.hpp"
#include "trirank/kernel_tracker.hpp"
#include "trirank/parallel.hpp"
#include "trirank/rng.hpp"
#include "trirank/row_sampler.hpp"

#include <cstddef>
#include <vector>

namespace trirank {

namespace detail {

template <class Backend>
struct StreamState {
    RowSampler sampler;
    KernelTracker<Backend> tracker;
    typename Backend::Row row;

    StreamState(const EntryDist& law, std::size_t n) : sampler(law), tracker(Backend(n, law.modulus())) {
        if constexpr (std::is_same_v<Backend, BinaryBackend>) row = tracker.backend().make_row();
    }

    void run(std::size_t n, Rng& rng) {
        tracker.reset();
        for (std::size_t i = 0; i < n; ++i) {
            if constexpr (std::is_same_v<Backend, BinaryBackend>) {
                sampler.sample_planes(i, rng, row, tracker.backend().stride());
            } else {
                sampler.sample_row(i, rng, row);
            }
            tracker.push_row(row);
        }
    }
};

template <class Backend, class Acc, class Visit, class Merge>
Acc stream_with(const EntryDist& law, std::size_t n, u64 trials, u64 seed, std::size_t workers, const Acc& init,
                Visit visit, Merge merge) {
    return run_trials(
        trials, workers, init, [&] { return StreamState<Backend>(law, n); },
        [&](StreamState<Backend>& st, Acc& acc, u64 t) {
            Rng rng = make_stream(seed, t);
            st.run(n, rng);
            visit(acc, t, st.tracker.orders());
        },
        merge);
}

} // namespace detail

/// Samples `trials` n x n matrices with entries from `law` (trial t uses
/// substream (seed, t)) and reports, per trial, the orders of the kernel
/// generators over Z/p^k where k is the precision of `law`. A generator of
/// order a < k is an invariant factor of valuation a; order k means >= k.
template <class Acc, class Visit, class Merge>
Acc stream_kernel_orders(const EntryDist& law, std::size_t n, u64 trials, u64 seed, std::size_t workers,
                         const Acc& init, Visit visit, Merge merge) {
    if (law.p() == 2) return detail::stream_with<BinaryBackend>(law, n, trials, seed, workers, init, visit, merge);
    return detail::stream_with<GenericBackend>(law, n, trials, seed, workers, init, visit, merge);
}

} // namespace trirank
