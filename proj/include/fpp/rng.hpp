#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, key, counter), so sampling order and thread count cannot change
// the values. The mixer is the splitmix64 finalizer.

#include <cstdint>

namespace fpp {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t key, std::uint64_t ctr = 0) {
    return mix64(mix64(seed ^ 0x6a09e667f3bcc908ULL) ^ mix64(key) ^ mix64(ctr ^ 0xbb67ae8584caa73bULL));
}

// Uniform in (0,1), never exactly 0 or 1.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t key, std::uint64_t ctr = 0) {
    return (static_cast<double>(keyed_u64(seed, key, ctr) >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

// Derive an independent child seed (for per-trial streams).
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index + 0x243f6a8885a308d3ULL));
}

}  // namespace fpp
