#pragma once

#include <cstdint>
#include <random>

#include "congestcut/errors.hpp"

namespace congestcut {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/**
 * Derives an independent mt19937_64 from a base seed and up to three stream
 * tags.  All randomness in the library flows through generators created here,
 * so a fixed (seed, tags) tuple reproduces a run bit for bit.
 */
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t a = 0,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= (a + 1) * 0x9e3779b97f4a7c15ull;
    h ^= splitmix64(s);
    s ^= (b + 1) * 0xbf58476d1ce4e5b9ull;
    h ^= splitmix64(s);
    s ^= (c + 1) * 0x94d049bb133111ebull;
    h ^= splitmix64(s);
    return std::mt19937_64(h);
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(std::mt19937_64& rng, double p) {
    if (p < 0.0 || p > 1.0) throw InvalidProbability(p);
    if (p >= 1.0) return true;
    return uniform01(rng) < p;
}

/** Number of successes among `trials` independent coins of bias p. */
inline std::int64_t binomial(std::mt19937_64& rng, std::int64_t trials, double p) {
    if (p < 0.0 || p > 1.0) throw InvalidProbability(p);
    if (trials <= 0) return 0;
    if (p >= 1.0) return trials;
    if (p <= 0.0) return 0;
    std::binomial_distribution<std::int64_t> dist(trials, p);
    return dist(rng);
}

/** Uniform integer in [lo, hi]. */
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    return dist(rng);
}

}  // namespace congestcut
