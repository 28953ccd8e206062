#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mpisim/phase_noise.hpp"

using namespace mpisim;

namespace {

constexpr double kTs = 1.0 / 106.25e9;

// Unbiased sample variance of x[n+k]-x[n] over non-overlapping blocks.
double block_difference_variance(const std::vector<double>& x, std::size_t k) {
    double sum = 0, sum2 = 0;
    std::size_t m = 0;
    for (std::size_t n = 0; n + k < x.size(); n += k) {
        const double d = x[n + k] - x[n];
        sum += d;
        sum2 += d * d;
        ++m;
    }
    const double mean = sum / m;
    return (sum2 - m * mean * mean) / (m - 1);
}

}  // namespace

TEST(WienerPhase, ZeroLinewidthIsFlat) {
    const auto p = wiener_phase(1000, 0.0, kTs, 5);
    for (double t : p.theta) EXPECT_EQ(t, 0.0);
}

TEST(WienerPhase, StartsAtZeroAndIsDeterministic) {
    const auto a = wiener_phase(5000, 5e6, kTs, 11);
    const auto b = wiener_phase(5000, 5e6, kTs, 11);
    EXPECT_EQ(a.theta[0], 0.0);
    EXPECT_EQ(a.theta, b.theta);
    EXPECT_EQ(a.symbol_period, kTs);
}

TEST(WienerPhase, StepVariance) {
    EXPECT_NEAR(wiener_step_variance(5e6, kTs), 2.95679308573157e-4, 1e-15);
}

TEST(WienerPhase, RejectsBadArguments) {
    EXPECT_THROW(wiener_phase(10, -1.0, kTs, 1), DomainError);
    EXPECT_THROW(wiener_phase(10, 1e6, 0.0, 1), DomainError);
    EXPECT_THROW(wiener_phase(0, 1e6, kTs, 1), SizeError);
}

// Var[theta[n+k] - theta[n]] = k * 2 pi dnu Ts, within the 3-sigma band of
// the sample-variance estimator (relative sd sqrt(2/(m-1)) for m blocks).
TEST(WienerPhase, VarianceGrowsLinearlyWithLag) {
    const auto p = wiener_phase(2'000'001, 5e6, kTs, 77);
    const double s2 = wiener_step_variance(5e6, kTs);
    for (std::size_t k : {1u, 2u, 5u, 10u, 20u}) {
        const std::size_t m = (p.size() - 1) / k;
        const double expected = k * s2;
        const double band = 3.0 * expected * std::sqrt(2.0 / (m - 1));
        EXPECT_NEAR(block_difference_variance(p.theta, k), expected, band) << "k=" << k;
    }
}

TEST(WienerPhase, OverlappingLagVarianceWithinFivePercent) {
    const auto p = wiener_phase(1'000'000, 5e6, kTs, 3);
    const double s2 = wiener_step_variance(5e6, kTs);
    for (std::size_t k : {1u, 10u, 100u}) {
        const auto d = delayed_difference(p, k);
        double mean = 0;
        for (double v : d) mean += v;
        mean /= d.size();
        double var = 0;
        for (double v : d) var += (v - mean) * (v - mean);
        var /= d.size() - 1;
        EXPECT_NEAR(var / (k * s2), 1.0, 0.05) << "k=" << k;
    }
}

TEST(DelayedDifference, ZeroDelayIsZero) {
    const auto p = wiener_phase(1000, 5e6, kTs, 1);
    for (double v : delayed_difference(p, 0)) EXPECT_EQ(v, 0.0);
}

TEST(DelayedDifference, ZeroLinewidthIsZero) {
    const auto p = wiener_phase(1000, 0.0, kTs, 1);
    for (double v : delayed_difference(p, 37)) EXPECT_EQ(v, 0.0);
}

TEST(DelayedDifference, AlignmentAndLength) {
    PhasePath p{{0.0, 1.0, 3.0, 6.0, 10.0}, kTs};
    const auto d = delayed_difference(p, 2);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d[0], 3.0);
    EXPECT_EQ(d[1], 5.0);
    EXPECT_EQ(d[2], 7.0);
    EXPECT_EQ(delayed_difference(p, 2, 2).size(), 2u);
}

TEST(DelayedDifference, InsufficientPath) {
    PhasePath p{{0.0, 1.0, 2.0}, kTs};
    EXPECT_THROW(delayed_difference(p, 3), SizeError);
    EXPECT_THROW(delayed_difference(p, 1, 3), SizeError);
}

TEST(DelayedDifference, VarianceAtTenthOfCoherenceLength) {
    const auto p = wiener_phase(1'000'677, 5e6, kTs, 8);
    const auto d = delayed_difference(p, 677);
    double s = 0, s2 = 0;
    for (double v : d) {
        s += v;
        s2 += v * v;
    }
    const double mean = s / d.size();
    const double var = s2 / d.size() - mean * mean;
    EXPECT_NEAR(var, 677 * wiener_step_variance(5e6, kTs), 0.02);  // ~0.200 rad^2
}

TEST(EnvelopeB, Extremes) {
    EXPECT_EQ(envelope_b(0.0, 0.0), 1.0);
    EXPECT_EQ(envelope_b(std::numbers::pi, 0.0), -1.0);
    EXPECT_NEAR(envelope_b(std::numbers::pi / 2, 0.0), 0.0, 1e-16);
}

TEST(EnvelopeB, BoundedAndPeriodic) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 10'000; ++i) {
        const double phi = u(rng), dt = u(rng);
        const double b = envelope_b(phi, dt);
        EXPECT_LE(std::abs(b), 1.0);
        EXPECT_NEAR(envelope_b(phi + 2 * std::numbers::pi, dt), b, 1e-12);
    }
}

TEST(CoherenceLength, FiveMegahertzInFiber) {
    EXPECT_NEAR(coherence_length_m(5e6, 1.468), 13.000940488384039, 1e-9);
}

TEST(CoherenceLength, ScalesInverselyWithLinewidth) {
    EXPECT_NEAR(coherence_length_m(10e6, 1.468), coherence_length_m(5e6, 1.468) / 2, 1e-12);
    EXPECT_NEAR(coherence_length_m(1e6, 1.0), kSpeedOfLight / (std::numbers::pi * 1e6), 1e-9);
}

TEST(CoherenceLength, Errors) {
    EXPECT_THROW(coherence_length_m(0.0, 1.468), InfiniteCoherenceError);
    EXPECT_THROW(coherence_length_m(-1.0, 1.468), DomainError);
    EXPECT_THROW(coherence_length_m(1e6, 0.5), DomainError);
}

TEST(DelaySymbols, Examples) {
    EXPECT_EQ(delay_symbols(0.0, 1.468, 106.25e9), 0u);
    // 1.468 * 1.30 * 106.25e9 / c = 676.36
    EXPECT_EQ(delay_symbols(1.30, 1.468, 106.25e9), 676u);
    // 130 m, about 10 Lc
    EXPECT_EQ(delay_symbols(130.0, 1.468, 106.25e9), 67636u);
    EXPECT_THROW(delay_symbols(-1.0, 1.468, 106.25e9), DomainError);
}

TEST(DelaySymbols, MonotoneInLength) {
    std::size_t prev = 0;
    for (double L = 0.0; L < 50.0; L += 0.0137) {
        const auto d = delay_symbols(L, 1.468, 106.25e9);
        EXPECT_GE(d, prev);
        prev = d;
    }
}

TEST(PhiFromDrift, Examples) {
    EXPECT_EQ(phi_from_drift({1.2e15, 2 * std::numbers::pi * 5e6, 0.0}, 0.0), 0.0);

    const DriftSpec drift{0.0, 2 * std::numbers::pi * 5e6, 25e-9};
    EXPECT_NEAR(phi_from_drift(drift, 0.0), std::numbers::pi / 4, 1e-12);

    const DriftSpec still{1.2e15, 0.0, 25e-9};
    const double phi0 = phi_from_drift(still, 0.0);
    for (double t : {1e-9, 1e-6, 1e-3, 1.0}) EXPECT_EQ(phi_from_drift(still, t), phi0);
}

TEST(PhiFromDrift, WrapsIntoPrincipalRange) {
    const DriftSpec drift{1.2e15, 2 * std::numbers::pi * 5e6, 25e-9};
    for (double t = -1e-6; t < 1e-6; t += 1.7e-8) {
        const double phi = phi_from_drift(drift, t);
        EXPECT_GE(phi, 0.0);
        EXPECT_LT(phi, 2 * std::numbers::pi);
    }
}
