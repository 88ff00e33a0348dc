#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace odsim {

using Rng = std::mt19937_64;

/// splitmix64 step; scrambles a seed so that nearby base seeds give
/// unrelated engine states.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

/// Uniform draw from [0, n). Rejection sampling, no modulo bias, and
/// identical output on every platform (unlike std::uniform_int_distribution).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

/// Uniform double in the open interval (0, 1).
inline double uniform_open01(Rng& rng) {
    return (static_cast<double>(rng() >> 12) + 0.5) * 0x1.0p-52;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_open01(rng);
}

/// Exponential inter-event time with the given rate. Strictly positive.
inline double exp_draw(Rng& rng, double rate) {
    if (rate <= 0.0) throw std::domain_error("exp_draw: rate must be positive");
    return -std::log(uniform_open01(rng)) / rate;
}

inline std::uint8_t uniform_byte(Rng& rng) { return static_cast<std::uint8_t>(rng() & 0xff); }

}  // namespace odsim
