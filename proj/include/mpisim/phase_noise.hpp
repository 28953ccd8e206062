#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mpisim/errors.hpp"
#include "mpisim/random.hpp"

namespace mpisim {

inline constexpr double kSpeedOfLight = 299'792'458.0;   // m/s
inline constexpr double kDefaultFiberIndex = 1.468;      // SMF group index

/// Laser phase sampled once per symbol.
struct PhasePath {
    std::vector<double> theta;
    double symbol_period = 0.0;

    std::size_t size() const noexcept { return theta.size(); }
};

/// Per-symbol variance of a Wiener phase increment, 2*pi*linewidth*T_s.
inline double wiener_step_variance(double linewidth_hz, double symbol_period) {
    return 2.0 * std::numbers::pi * linewidth_hz * symbol_period;
}

/// Brownian laser phase with theta[0] = 0.
inline PhasePath wiener_phase(std::size_t length, double linewidth_hz, double symbol_period, std::uint64_t seed) {
    if (length == 0) throw SizeError("wiener_phase: length must be at least 1");
    if (!(linewidth_hz >= 0.0)) throw DomainError("wiener_phase: linewidth must be non-negative");
    if (!(symbol_period > 0.0)) throw DomainError("wiener_phase: symbol period must be positive");

    PhasePath path{std::vector<double>(length, 0.0), symbol_period};
    const double sigma = std::sqrt(wiener_step_variance(linewidth_hz, symbol_period));
    if (sigma == 0.0) return path;

    Rng rng(seed);
    std::normal_distribution<double> step(0.0, sigma);
    double acc = 0.0;
    for (std::size_t n = 1; n < length; ++n) {
        acc += step(rng);
        path.theta[n] = acc;
    }
    return path;
}

/// out[n] = theta[n + delay] - theta[n]: the phase of the direct signal at
/// measured symbol n relative to the reflection launched delay symbols
/// earlier. Produces `count` values, or every available one when omitted.
inline std::vector<double> delayed_difference(const PhasePath& path, std::size_t delay_symbols,
                                              std::optional<std::size_t> count = std::nullopt) {
    if (path.size() <= delay_symbols) {
        throw SizeError("delayed_difference: path of " + std::to_string(path.size()) +
                        " samples is too short for delay " + std::to_string(delay_symbols));
    }
    const std::size_t available = path.size() - delay_symbols;
    const std::size_t n_out = count.value_or(available);
    if (n_out > available) {
        throw SizeError("delayed_difference: need " + std::to_string(n_out + delay_symbols) +
                        " phase samples, have " + std::to_string(path.size()));
    }
    std::vector<double> out(n_out);
    for (std::size_t n = 0; n < n_out; ++n) {
        out[n] = path.theta[n + delay_symbols] - path.theta[n];
    }
    return out;
}

/// B(phi, t) = cos(phi + delta_theta).
inline double envelope_b(double phi_rad, double delta_theta) noexcept {
    return std::cos(phi_rad + delta_theta);
}

inline std::vector<double> envelope_b(double phi_rad, std::span<const double> delta_theta) {
    std::vector<double> out(delta_theta.size());
    for (std::size_t n = 0; n < delta_theta.size(); ++n) out[n] = envelope_b(phi_rad, delta_theta[n]);
    return out;
}

/// Lorentzian coherence length in fiber, c / (pi * n * linewidth).
inline double coherence_length_m(double linewidth_hz, double fiber_index = kDefaultFiberIndex) {
    if (linewidth_hz == 0.0) throw InfiniteCoherenceError();
    if (!(linewidth_hz > 0.0)) throw DomainError("coherence_length_m: linewidth must be positive");
    if (!(fiber_index >= 1.0)) throw DomainError("coherence_length_m: group index must be >= 1");
    return kSpeedOfLight / (std::numbers::pi * fiber_index * linewidth_hz);
}

/// Round-trip delay n*L/c quantized to the nearest whole symbol.
inline std::size_t delay_symbols(double path_length_m, double fiber_index, double baud_rate) {
    if (!(path_length_m >= 0.0)) throw DomainError("delay_symbols: path length must be non-negative");
    if (!(fiber_index > 0.0) || !(baud_rate > 0.0)) {
        throw DomainError("delay_symbols: group index and baud rate must be positive");
    }
    return static_cast<std::size_t>(std::llround(fiber_index * path_length_m * baud_rate / kSpeedOfLight));
}

struct DriftSpec {
    double omega_o = 0.0;      ///< carrier angular frequency, rad/s
    double delta_omega = 0.0;  ///< frequency drift accumulated over the round trip, rad/s
    double tau = 0.0;          ///< round-trip delay, s
};

inline double wrap_two_pi(double x) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(x, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

/// Phase offset omega_o*tau - delta_omega*t + delta_omega*tau, in [0, 2*pi).
inline double phi_from_drift(const DriftSpec& spec, double t) {
    if (!(spec.tau >= 0.0)) throw DomainError("phi_from_drift: tau must be non-negative");
    // Reduce each product separately; omega_o*tau is typically ~1e7 rad.
    return wrap_two_pi(wrap_two_pi(spec.omega_o * spec.tau) + wrap_two_pi(spec.delta_omega * spec.tau) -
                       wrap_two_pi(spec.delta_omega * t));
}

}  // namespace mpisim
