#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mpisim {

using Rng = std::mt19937_64;

/// Offsets added to a master seed to obtain the independent sub-streams of
/// one simulation point.
namespace seed_offset {
inline constexpr std::uint64_t symbols = 1;
inline constexpr std::uint64_t phase = 2;
inline constexpr std::uint64_t noise = 3;
}  // namespace seed_offset

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Order-sensitive hash of a seed and a tuple of coordinates.
constexpr std::uint64_t hash_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) noexcept {
    std::uint64_t h = mix64(master);
    for (auto c : coords) {
        h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
    }
    return h;
}

}  // namespace mpisim
