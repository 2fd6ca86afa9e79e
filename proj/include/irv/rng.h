#pragma once

#include <cstdint>
#include <random>

namespace irv {

// splitmix64 finalizer, used to spread user seeds and derive chunk seeds.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed for chunk number `chunk` of a run seeded with `seed`. Chunks get
// independent streams so results do not depend on how work is split.
inline uint64_t chunk_seed(uint64_t seed, uint64_t chunk) {
    return mix64(seed ^ mix64(chunk + 1));
}

// mt19937_64 wrapper that remembers its seed and produces doubles from raw
// bits, so sampling does not depend on the standard library's distribution
// implementations.
struct Rng {
    std::mt19937_64 gen;
    uint64_t seed = 0;

    explicit Rng(uint64_t s) : gen(s), seed(s) {}

    uint64_t bits() { return gen(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n). Modulo bias is below 1e-17 for the tiny n used here.
    int uniform_int(int n) { return static_cast<int>(bits() % static_cast<uint64_t>(n)); }
};

}  // namespace irv
