#pragma once

#include <cstdint>

// Small deterministic RNG/hash helpers. We avoid std:: distributions on
// purpose: their output is implementation-defined, and the artifact promises
// bit-identical results for a given seed.
namespace fable::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1).
inline double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) *
           (1.0 / 9007199254740992.0);
}

/// Uniform integer in [0, n).
inline std::uint64_t below(std::uint64_t& state, std::uint64_t n) {
    return splitmix64(state) % n;
}

/// Order-insensitive combine for seeding from several values.
inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
    return splitmix64(s);
}

}  // namespace fable::rng
