#pragma once

#include "trirank/modular.hpp"

#include <random>

namespace trirank {

using Rng = std::mt19937_64;

/// Seed of the substream for (seed, stream); splitmix64 finalizer over both words.
inline u64 derive_stream_seed(u64 seed, u64 stream) {
    u64 z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng make_stream(u64 seed, u64 stream) { return Rng(derive_stream_seed(seed, stream)); }

} // namespace trirank
