#pragma once

#include <cstdint>
#include <random>

namespace fbkde {

// splitmix64 finalizer; used to derive independent seed streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic seed for a sub-stream identified by up to three indices.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix64(seed);
    s = mix64(s ^ mix64(a + 0x1));
    s = mix64(s ^ mix64(b + 0x2));
    s = mix64(s ^ mix64(c + 0x3));
    return s;
}

using Rng = std::mt19937_64;

}  // namespace fbkde
