#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace qpr {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64_step(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Independent stream seed for (seed, key). Keys are round numbers, trial
// indices, codebook positions and the like, so every sub-computation gets a
// reproducible generator of its own.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
    std::uint64_t s = seed ^ ((key + 0x632be59bd9b4e019ull) * 0x9e3779b97f4a7c15ull);
    return splitmix64_step(s);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t key) {
    return Rng(derive_seed(seed, key));
}

// Unbiased draw from {0, ..., bound-1}. Hand-rolled rejection sampling so the
// consumed sequence never depends on standard-library distribution internals.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound < 2) return 0;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace qpr
