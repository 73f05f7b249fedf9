#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Counter-based random streams: every draw is a pure function of
// (seed, index, stream, counter), so serial and parallel generation
// produce bit-identical results.

namespace persistlab::rng {

enum class Stream : std::uint64_t {
    type_draw = 1,
    trait = 2,
    instrument = 3,
    shock = 4,
    markov = 5,
    eps = 6,
    outcome_noise = 7,
    rep_seed = 8,
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t index,
                             Stream stream, std::uint64_t counter = 0) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ index);
    h = mix64(h ^ static_cast<std::uint64_t>(stream));
    h = mix64(h ^ counter);
    return h;
}

// Uniform on (0,1); never returns 0 or 1 so it is safe under log().
constexpr double uniform(std::uint64_t seed, std::uint64_t index,
                         Stream stream, std::uint64_t counter = 0) {
    const std::uint64_t h = bits(seed, index, stream, counter);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller; consumes counters (2k, 2k+1).
inline double normal(std::uint64_t seed, std::uint64_t index, Stream stream,
                     std::uint64_t counter = 0) {
    const double u1 = uniform(seed, index, stream, 2 * counter);
    const double u2 = uniform(seed, index, stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

// Derives an independent sub-seed, e.g. one per Monte Carlo rep.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return bits(seed, index, Stream::rep_seed);
}

}  // namespace persistlab::rng
