#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace biwave {

// Counter-based generators: every stream is a pure function of its key, so
// parallel acquisition produces the same numbers as a sequential run.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_key(mix_key(a, b), c);
}

/// Uniform double in [0, 1) from a 64-bit word.
inline double to_unit(std::uint64_t u) {
    return static_cast<double>(u >> 11) * 0x1.0p-53;
}

/// Two independent standard normals from one key (Box-Muller).
inline void gaussian_pair(std::uint64_t key, double& g1, double& g2) {
    double u1 = to_unit(splitmix64(key));
    double u2 = to_unit(splitmix64(key + 1));
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    g1 = r * std::cos(a);
    g2 = r * std::sin(a);
}

}  // namespace biwave
