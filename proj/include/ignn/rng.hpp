#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ignn {

// All stochastic operations in the library draw from std::mt19937_64 seeded
// through derive_seed, so every run is a pure function of (inputs, seed).
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Named seed streams so independent consumers (weight init, negative
// sampling, pair sampling, ...) never share a generator.
enum class SeedStream : std::uint64_t {
    split = 1,
    weight_init = 2,
    negative_sampling = 3,
    distance_pairs = 4,
    task_pairs = 5,
    eval_pairs = 6,
    generator = 7,
};

inline std::uint64_t derive_seed(std::uint64_t base, SeedStream stream, std::uint64_t index = 0) {
    std::uint64_t s = base;
    (void)splitmix64_next(s);
    s ^= 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(stream);
    (void)splitmix64_next(s);
    s ^= 0xbf58476d1ce4e5b9ULL * (index + 1);
    return splitmix64_next(s);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// 53-bit uniform in [0, 1); avoids the implementation-defined behaviour of
// std::uniform_real_distribution.
inline double uniform_real01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_real01(rng);
}

// Lemire's unbiased bounded integer draw in [0, n).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    __uint128_t m = static_cast<__uint128_t>(rng()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        const std::uint64_t threshold = -n % n;
        while (lo < threshold) {
            m = static_cast<__uint128_t>(rng()) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

template <typename T>
void fisher_yates_shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[uniform_below(rng, i)]);
    }
}

} // namespace ignn
