#include "trirank/row_sampler.hpp"

#include "trirank/errors.hpp"

#include <algorithm>

namespace trirank {

RowSampler::RowSampler(const EntryDist& dist)
    : mod_(dist.modulus()), words_(dist.is_uniform() && dist.p() == 2), entries_(dist) {}

void RowSampler::sample_planes(std::size_t i, Rng& rng, std::span<u64> out, std::size_t stride) {
    require(mod_.p() == 2, "bit planes require p = 2");
    const std::size_t used = i / 64 + 1;
    const u64 last_mask = (i % 64 == 63) ? ~u64{0} : ((u64{1} << (i % 64 + 1)) - 1);
    const int k = planes();
    if (words_) {
        for (int a = 0; a < k; ++a) {
            u64* plane = out.data() + static_cast<std::size_t>(a) * stride;
            for (std::size_t w = 0; w < used; ++w) plane[w] = rng();
            plane[used - 1] &= last_mask;
        }
        return;
    }
    for (int a = 0; a < k; ++a) {
        std::fill_n(out.data() + static_cast<std::size_t>(a) * stride, used, u64{0});
    }
    for (std::size_t j = 0; j <= i; ++j) {
        const u64 x = entries_(rng);
        for (int a = 0; a < k; ++a) {
            if ((x >> a) & 1) out[static_cast<std::size_t>(a) * stride + j / 64] |= u64{1} << (j % 64);
        }
    }
}

void RowSampler::sample_row(std::size_t i, Rng& rng, std::vector<u64>& out) {
    out.resize(i + 1);
    if (!words_) {
        for (std::size_t j = 0; j <= i; ++j) out[j] = entries_(rng);
        return;
    }
    const std::size_t stride = i / 64 + 1;
    const int k = planes();
    scratch_.assign(stride * static_cast<std::size_t>(k), 0);
    sample_planes(i, rng, scratch_, stride);
    for (std::size_t j = 0; j <= i; ++j) {
        u64 x = 0;
        for (int a = 0; a < k; ++a) x |= ((scratch_[static_cast<std::size_t>(a) * stride + j / 64] >> (j % 64)) & 1) << a;
        out[j] = x;
    }
}

TriMatrix sample_matrix(const EntryDist& dist, std::size_t n, Rng& rng) {
    RowSampler sampler(dist);
    TriMatrix m(n, sampler.modulus());
    std::vector<u64> row;
    for (std::size_t i = 0; i < n; ++i) {
        sampler.sample_row(i, rng, row);
        std::copy(row.begin(), row.end(), m.row(i).begin());
    }
    return m;
}

} // namespace trirank
