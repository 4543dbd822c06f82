#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace ridesim {

// Engine plus hand-rolled distributions, so draws are identical across standard
// library implementations (std::*_distribution algorithms are unspecified).
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for a named sub-stream, e.g. ("rebalance", vehicle id).
inline std::uint64_t stream_seed(std::uint64_t seed, std::string_view name, std::uint64_t index = 0)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return splitmix64(seed ^ splitmix64(h ^ splitmix64(index)));
}

inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi)
{
    return lo + (hi - lo) * uniform01(rng);
}

/// Unbiased integer in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n)
{
    if (n <= 1) {
        return 0;
    }
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
    std::uint64_t x = rng();
    while (x >= limit) {
        x = rng();
    }
    return x % n;
}

inline bool bernoulli(Rng& rng, double p)
{
    return uniform01(rng) < p;
}

inline double standard_normal(Rng& rng)
{
    double u1 = uniform01(rng);
    while (u1 <= 0.0) {
        u1 = uniform01(rng);
    }
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

inline double exponential(Rng& rng, double mean)
{
    double u = uniform01(rng);
    while (u <= 0.0) {
        u = uniform01(rng);
    }
    return -mean * std::log(u);
}

} // namespace ridesim
