#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpisim/errors.hpp"
#include "mpisim/random.hpp"

namespace mpisim {

/// PAM4 amplitude alphabet {-1.5, -0.5, +0.5, +1.5}, indexed 0..3.
inline constexpr std::array<double, 4> kPam4Levels{-1.5, -0.5, 0.5, 1.5};

/// E[d^2] of the equiprobable alphabet.
inline constexpr double kPam4Power = 1.25;

namespace detail {
// Reflected binary code in amplitude order: 00, 01, 11, 10.
inline constexpr std::array<std::uint8_t, 4> kGrayLabel{0b00, 0b01, 0b11, 0b10};
inline constexpr std::array<std::uint8_t, 4> kGrayInverse{0, 1, 3, 2};
}  // namespace detail

constexpr std::uint8_t gray_map(unsigned index) {
    if (index > 3) throw DomainError("PAM4 index out of range: " + std::to_string(index));
    return detail::kGrayLabel[index];
}

constexpr unsigned gray_unmap(unsigned bits) {
    if (bits > 3) throw DomainError("PAM4 gray label out of range: " + std::to_string(bits));
    return detail::kGrayInverse[bits];
}

constexpr int hamming_distance(unsigned a, unsigned b) noexcept {
    return std::popcount(a ^ b);
}

class Pam4Level {
public:
    constexpr explicit Pam4Level(unsigned index) : index_(static_cast<std::uint8_t>(index)) {
        if (index > 3) throw DomainError("PAM4 index out of range: " + std::to_string(index));
    }

    static constexpr Pam4Level from_bits(unsigned bits) { return Pam4Level(gray_unmap(bits)); }

    constexpr unsigned index() const noexcept { return index_; }
    constexpr double amplitude() const noexcept { return static_cast<double>(index_) - 1.5; }
    constexpr std::uint8_t bits() const noexcept { return detail::kGrayLabel[index_]; }

    friend constexpr bool operator==(Pam4Level, Pam4Level) = default;

private:
    std::uint8_t index_;
};

struct SymbolStream {
    std::vector<std::uint8_t> indices;
    std::vector<double> levels;

    std::size_t size() const noexcept { return indices.size(); }
    bool empty() const noexcept { return indices.empty(); }
};

inline SymbolStream make_stream(std::vector<std::uint8_t> indices) {
    SymbolStream s;
    s.levels.reserve(indices.size());
    for (auto i : indices) {
        if (i > 3) throw DomainError("PAM4 index out of range: " + std::to_string(i));
        s.levels.push_back(static_cast<double>(i) - 1.5);
    }
    s.indices = std::move(indices);
    return s;
}

/// I.i.d. uniform PAM4 symbols. Each 64-bit generator word supplies 32 symbols,
/// low bits first, so the stream depends only on (count, seed).
inline SymbolStream generate_symbols(std::size_t count, std::uint64_t seed) {
    if (count == 0) throw SizeError("generate_symbols: empty stream requested");
    Rng rng(seed);
    SymbolStream s;
    s.indices.resize(count);
    s.levels.resize(count);
    std::uint64_t word = 0;
    for (std::size_t n = 0; n < count; ++n) {
        if (n % 32 == 0) word = rng();
        auto idx = static_cast<std::uint8_t>(word & 0b11);
        word >>= 2;
        s.indices[n] = idx;
        s.levels[n] = static_cast<double>(idx) - 1.5;
    }
    return s;
}

/// Ratio of the highest to the lowest optical power level, V_b + 1.5 over V_b - 1.5.
inline double extinction_ratio_db(double bias_vb) {
    if (!(bias_vb > 1.5)) throw DomainError("bias must exceed 1.5 so every power level is positive");
    return 10.0 * std::log10((bias_vb + 1.5) / (bias_vb - 1.5));
}

}  // namespace mpisim
