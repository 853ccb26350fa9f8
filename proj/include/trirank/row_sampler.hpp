#pragma once

#include "trirank/entry_dist.hpp"
#include "trirank/plinalg.hpp"
#include "trirank/rng.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace trirank {

/// Draws the rows of a random lower triangular matrix one at a time.
///
/// Row i holds i + 1 entries. Both output forms consume the engine in the same
/// way, so a matrix sampled densely and one streamed into a kernel tracker from
/// the same seed are identical. For the uniform law mod 2^k the entries are
/// produced a word of bits at a time (k planes of ceil((i+1)/64) words);
/// every other law draws entry by entry.
class RowSampler {
public:
    explicit RowSampler(const EntryDist& dist);

    const Modulus& modulus() const { return mod_; }
    int planes() const { return mod_.exponent(); }

    void sample_row(std::size_t i, Rng& rng, std::vector<u64>& out);
    /// p = 2 only. Plane a occupies out[a * stride, a * stride + stride);
    /// words at or beyond i / 64 + 1 are left untouched.
    void sample_planes(std::size_t i, Rng& rng, std::span<u64> out, std::size_t stride);

private:
    Modulus mod_;
    bool words_;
    EntrySampler entries_;
    std::vector<u64> scratch_;
};

TriMatrix sample_matrix(const EntryDist& dist, std::size_t n, Rng& rng);

} // namespace trirank
