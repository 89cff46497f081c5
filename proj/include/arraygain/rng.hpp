#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace arraygain {

// Tags keep the substreams of different consumers apart even when their
// counters coincide.
enum class StreamTag : std::uint64_t {
    Placement = 1,
    Fading = 2,
    Visibility = 3,
    ClusterAngles = 4,
    Noise = 5,
    Symbols = 6,
    PatternPhases = 7,
    Test = 99,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent generator for a (seed, tag, counters...) tuple.
///
/// The derivation depends only on the tuple, so a trial draws the same numbers
/// no matter which thread evaluates it or in which order.
inline std::mt19937_64 substream(std::uint64_t master_seed, StreamTag tag,
                                 std::initializer_list<std::uint64_t> counters = {}) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
    for (const auto c : counters) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
}

/// Standard circularly-symmetric complex Gaussian CN(0, 1).
template <class Rng>
std::complex<double> complex_gaussian(Rng& rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

}  // namespace arraygain
