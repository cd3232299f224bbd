#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mfl {

// SplitMix64 finalizer used as a stateless hash.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so parallel sampling is order-independent
// and bitwise reproducible regardless of scheduling.
struct CounterRng {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0; // e.g. replica index

    std::uint64_t bits(std::uint64_t counter) const {
        std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
        h = mix64(h ^ (stream * 0x9e3779b97f4a7c15ULL + 1));
        h = mix64(h ^ counter);
        return h;
    }

    // Uniform in (0, 1); never returns 0 so it is safe under log().
    double uniform01(std::uint64_t counter) const {
        return double(bits(counter) >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    double uniform(std::uint64_t counter, double a, double b) const {
        return a + (b - a) * uniform01(counter);
    }

    // Box-Muller; consumes counters 2k and 2k+1.
    double normal(std::uint64_t counter) const {
        const double u1 = uniform01(2 * counter);
        const double u2 = uniform01(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }
};

// Counter layout for per-(particle, coordinate, slot) draws.
inline std::uint64_t draw_key(std::uint64_t particle, std::uint64_t coord,
                              std::uint64_t slot = 0) {
    return (particle * 8 + coord) * 8 + slot;
}

} // namespace mfl
