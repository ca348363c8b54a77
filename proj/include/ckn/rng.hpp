#pragma once

#include <cstdint>
#include <cmath>

namespace ckn {

// Counter-based generator: value i of stream `seed` is a pure function of
// (seed, i), so fields regenerate identically regardless of evaluation order.
struct SplitMix64 {
    std::uint64_t seed;

    explicit SplitMix64(std::uint64_t s) : seed(s) {}

    std::uint64_t at(std::uint64_t i) const {
        std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]; never returns 0 so log() below is safe.
    double uniform(std::uint64_t i) const {
        return (static_cast<double>(at(i) >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller on counters (2i, 2i+1).
    double gaussian(std::uint64_t i) const {
        const double u1 = uniform(2 * i);
        const double u2 = uniform(2 * i + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }
};

} // namespace ckn
