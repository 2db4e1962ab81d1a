#pragma once

#include <cstdint>

namespace hspde {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so Monte Carlo results do not depend on
// scheduling. SplitMix64 finalizer evaluated at a strided counter.
struct CounterRng {
    std::uint64_t base;

    CounterRng(std::uint64_t seed, std::uint64_t stream);

    // Uniform in [0,1), 53-bit resolution.
    double uniform(std::uint64_t counter) const;
    // Standard normal via Box-Muller (cos branch); consumes counters 2k, 2k+1.
    double normal(std::uint64_t counter) const;
    std::uint64_t bits(std::uint64_t counter) const;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace hspde
