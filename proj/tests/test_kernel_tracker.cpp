#include "trirank/kernel_tracker.hpp"
#include "trirank/oracles.hpp"
#include "trirank/row_sampler.hpp"
#include "trirank/streaming.hpp"

#include <doctest.h>

using namespace trirank;

namespace {

template <class Backend>
CokernelType track(const TriMatrix& m, Backend be) {
    KernelTracker<Backend> kt(be);
    for (std::size_t i = 0; i < m.n(); ++i) {
        typename Backend::Row row;
        if constexpr (std::is_same_v<Backend, BinaryBackend>) {
            row = be.make_row();
            for (std::size_t j = 0; j <= i; ++j) be.set(row, j, m.at(i, j));
        } else {
            row.assign(m.row(i).begin(), m.row(i).end());
        }
        kt.push_row(row);
    }
    return kt.cokernel_type();
}

EntryDist skewed_law(u64 p, int k, int variant) {
    const Modulus mod(p, k);
    std::vector<std::pair<u64, double>> w;
    if (variant == 0) {
        for (u64 r = 0; r < mod.value(); ++r) w.emplace_back(r, r % p == 0 ? 4.0 : 1.0);
        return EntryDist(p, k, w);
    }
    return valuation_heavy_law(p, k);
}

} // namespace

TEST_CASE("tracked kernels reproduce Smith valuations") {
    for (u64 p : {2, 3, 5}) {
        for (int k = 1; k <= 4; ++k) {
            for (int t = 0; t < 60; ++t) {
                Rng rng(static_cast<u64>(t) * 31 + static_cast<u64>(k) * 7 + p);
                const std::size_t n = 1 + rng() % 40;
                const TriMatrix m = sample_matrix(skewed_law(p, k, t % 2), n, rng);
                const CokernelType ref = invariant_valuations(m);
                CAPTURE(p);
                CAPTURE(k);
                CAPTURE(n);
                CHECK(track(m, GenericBackend(n, m.modulus())) == ref);
                if (p == 2) CHECK(track(m, BinaryBackend(n, m.modulus())) == ref);
                if (n <= 8) CHECK(ref == exact_cokernel_type(m));
            }
        }
    }
}

TEST_CASE("bit-plane backend arithmetic") {
    const Modulus mod(2, 4);
    BinaryBackend be(130, mod);
    auto a = be.make_row();
    auto b = be.make_row();
    Rng rng(9);
    std::vector<u64> x(130), y(130);
    for (std::size_t j = 0; j < 130; ++j) {
        x[j] = rng() % 16;
        y[j] = rng() % 16;
        be.set(a, j, x[j]);
        be.set(b, j, y[j]);
    }
    u64 dot = 0;
    for (std::size_t j = 0; j < 130; ++j) dot = (dot + x[j] * y[j]) % 16;
    CHECK(be.dot(a, b, 130) == dot);
    be.axpy(a, 5, b, 130);
    for (std::size_t j = 0; j < 130; ++j) CHECK(be.get(a, j) == (x[j] + 5 * y[j]) % 16);
}

TEST_CASE("streamed trials match densely sampled matrices") {
    for (u64 p : {2, 3}) {
        const EntryDist law = p == 2 ? EntryDist::uniform(2, 3) : valuation_heavy_law(3, 2);
        const std::size_t n = 70;
        const u64 seed = 77;
        std::vector<std::vector<int>> seen(5);
        auto got = stream_kernel_orders(
            law, n, 5, seed, 2, seen,
            [](std::vector<std::vector<int>>& acc, u64 t, const std::vector<int>& orders) { acc[t] = orders; },
            [](std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b) {
                for (std::size_t t = 0; t < a.size(); ++t) {
                    if (!b[t].empty()) a[t] = b[t];
                }
            });
        for (u64 t = 0; t < 5; ++t) {
            Rng rng = make_stream(seed, t);
            const CokernelType ct = invariant_valuations(sample_matrix(law, n, rng));
            for (int i = 1; i <= law.precision(); ++i) {
                std::size_t count = 0;
                for (int a : got[t]) count += a >= i;
                CHECK(count == ct.rank_of_multiple(i));
            }
        }
    }
}
