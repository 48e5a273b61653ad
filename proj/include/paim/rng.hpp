// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#ifndef PAIM_RNG_HPP
#define PAIM_RNG_HPP

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace paim {

// Counter-derived substreams: every (seed, a, b, c) tuple maps to an
// independent generator, so trial results do not depend on worker count
// or execution order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ splitmix64(a));
    k = splitmix64(k ^ splitmix64(b));
    k = splitmix64(k ^ splitmix64(c));
    return k;
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t a,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
    return std::mt19937_64(substream_key(seed, a, b, c));
}

inline double randn(std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

// Circularly-symmetric complex Gaussian with E{|z|^2} = 1.
inline std::complex<double> crandn(std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0 / std::numbers::sqrt2);
    const double re = dist(rng);
    const double im = dist(rng);
    return {re, im};
}

} // namespace paim

#endif
