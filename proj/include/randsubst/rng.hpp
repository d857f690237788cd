#pragma once

#include <cstdint>

namespace randsubst {

// Counter-based generator: every draw is a pure hash of
// (seed, run, iteration, position), so ensembles are reproducible under
// any execution order or parallel schedule.
namespace rng {

inline constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t run,
                         std::uint64_t iteration, std::uint64_t position) {
    std::uint64_t h = mix(seed + golden);
    h = mix(h ^ (run * golden));
    h = mix(h ^ (iteration * golden));
    h = mix(h ^ (position * golden));
    return h;
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform(std::uint64_t seed, std::uint64_t run,
                      std::uint64_t iteration, std::uint64_t position) {
    return static_cast<double>(key(seed, run, iteration, position) >> 11) *
           0x1.0p-53;
}

}  // namespace rng
}  // namespace randsubst
