#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>

#include "mpisim/signal_model.hpp"

using namespace mpisim;

TEST(GrayMap, ReflectedCodeInAmplitudeOrder) {
    EXPECT_EQ(gray_map(0), 0b00);
    EXPECT_EQ(gray_map(1), 0b01);
    EXPECT_EQ(gray_map(2), 0b11);
    EXPECT_EQ(gray_map(3), 0b10);
}

TEST(GrayMap, Bijective) {
    for (unsigned i = 0; i < 4; ++i) EXPECT_EQ(gray_unmap(gray_map(i)), i);
    for (unsigned b = 0; b < 4; ++b) EXPECT_EQ(gray_map(gray_unmap(b)), b);
}

TEST(GrayMap, AdjacentLevelsDifferInOneBit) {
    for (unsigned i = 0; i + 1 < 4; ++i) EXPECT_EQ(hamming_distance(gray_map(i), gray_map(i + 1)), 1) << i;
}

TEST(GrayMap, RejectsOutOfRange) {
    EXPECT_THROW(gray_map(4), DomainError);
    EXPECT_THROW(gray_unmap(7), DomainError);
    EXPECT_THROW(Pam4Level(9), DomainError);
}

TEST(Pam4Level, AmplitudeIsIndexMinusOneAndAHalf) {
    for (unsigned i = 0; i < 4; ++i) {
        const Pam4Level l(i);
        EXPECT_EQ(l.amplitude(), static_cast<double>(i) - 1.5);
        EXPECT_EQ(l.amplitude(), kPam4Levels[i]);
        EXPECT_EQ(Pam4Level::from_bits(l.bits()), l);
    }
}

TEST(GenerateSymbols, Deterministic) {
    const auto a = generate_symbols(4, 42);
    const auto b = generate_symbols(4, 42);
    EXPECT_EQ(a.indices, b.indices);
    EXPECT_EQ(a.levels, b.levels);

    const auto big1 = generate_symbols(10'000, 7);
    const auto big2 = generate_symbols(10'000, 8);
    EXPECT_NE(big1.indices, big2.indices);
}

TEST(GenerateSymbols, PrefixStable) {
    const auto short_run = generate_symbols(100, 3);
    const auto long_run = generate_symbols(1000, 3);
    for (std::size_t n = 0; n < 100; ++n) EXPECT_EQ(short_run.indices[n], long_run.indices[n]);
}

TEST(GenerateSymbols, SingleSymbolInRange) {
    const auto s = generate_symbols(1, 99);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_LE(s.indices[0], 3);
    EXPECT_EQ(s.levels[0], s.indices[0] - 1.5);
}

TEST(GenerateSymbols, EmptyIsAnError) { EXPECT_THROW(generate_symbols(0, 1), SizeError); }

TEST(GenerateSymbols, UniformOverAlphabet) {
    constexpr std::size_t n = 1'000'000;
    const auto s = generate_symbols(n, 2024);
    std::array<std::size_t, 4> counts{};
    for (std::size_t i = 0; i < n; ++i) {
        ++counts[s.indices[i]];
        ASSERT_EQ(s.levels[i], s.indices[i] - 1.5);
    }
    double chi2 = 0.0;
    for (auto c : counts) {
        const double f = static_cast<double>(c) / n;
        EXPECT_NEAR(f, 0.25, 0.0025);
        chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
    }
    // chi-square, 3 dof, p = 0.001
    EXPECT_LT(chi2, 16.27);
}

TEST(ExtinctionRatio, DefaultBiasIsAboutFourDb) {
    EXPECT_NEAR(extinction_ratio_db(3.5), 3.979400086720376, 1e-12);
    EXPECT_NEAR(extinction_ratio_db(2.5), 6.020599913279624, 1e-12);
}

TEST(ExtinctionRatio, VanishesForLargeBias) {
    EXPECT_LT(extinction_ratio_db(1e9), 1e-7);
    EXPECT_GT(extinction_ratio_db(1e9), 0.0);
}

TEST(ExtinctionRatio, RejectsNonPositivePower) {
    EXPECT_THROW(extinction_ratio_db(1.5), DomainError);
    EXPECT_THROW(extinction_ratio_db(0.0), DomainError);
    EXPECT_THROW(extinction_ratio_db(std::numeric_limits<double>::quiet_NaN()), DomainError);
}
