#include "hspde/rng.hpp"

#include <cmath>

namespace hspde {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
}

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : base(mix64(seed + kGolden) ^ mix64(stream * 0xda942042e4dd58b5ull + 0x2545f4914f6cdd1dull)) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
    return mix64(base + (counter + 1) * kGolden);
}

double CounterRng::uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
    // u1 in (0,1] so the log never sees zero.
    const double u1 = 1.0 - uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace hspde
