#pragma once

#include <cstdint>
#include <random>

namespace fbsim {

// Seed mixing and per-trial stream derivation. Trials must be reproducible
// under any parallel schedule, so every trial gets its own engine seeded from
// a counter-derived value instead of sharing a stream.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derivation chain: master -> point -> size -> trial. Each stage feeds the
// next through splitmix64 so nearby counters give unrelated streams.
inline uint64_t derive_seed(uint64_t master, uint64_t point, uint64_t size_index, uint64_t trial) {
    uint64_t s = splitmix64(master ^ 0xabcdef0123456789ULL);
    s = splitmix64(s ^ (point * 0x9e3779b97f4a7c15ULL + 1));
    s = splitmix64(s ^ (size_index * 0xc2b2ae3d27d4eb4fULL + 1));
    s = splitmix64(s ^ (trial * 0x165667b19e3779f9ULL + 1));
    return s;
}

using Rng = std::mt19937_64;

inline Rng make_rng(uint64_t seed) {
    return Rng(seed);
}

// Uniform double in [0,1) built from the top 53 bits; identical output on any
// platform for the same engine state.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) {
    return uniform01(rng) < p;
}

// Uniform integer in [0, n) by rejection; avoids modulo bias.
inline uint64_t uniform_below(Rng& rng, uint64_t n) {
    if (n == 0) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

}  // namespace fbsim
