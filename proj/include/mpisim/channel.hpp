#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mpisim/errors.hpp"
#include "mpisim/random.hpp"
#include "mpisim/signal_model.hpp"

namespace mpisim {

/// Received samples, one per measured symbol, with the transmitted indices
/// they must be decided as. The optional vectors are diagnostics.
struct ChannelOutput {
    std::vector<double> samples;
    std::vector<std::uint8_t> truth;
    std::optional<std::vector<double>> mpi_term;
    std::optional<std::vector<double>> noise;

    std::size_t size() const noexcept { return samples.size(); }
};

/// SIR = -20 log10(rho). An infinite SIR means MPI off (rho = 0).
inline double sir_to_rho(double sir_db) {
    if (std::isnan(sir_db)) throw DomainError("sir_to_rho: SIR is NaN");
    if (sir_db == std::numeric_limits<double>::infinity()) return 0.0;
    if (!(sir_db > 0.0)) throw DomainError("sir_to_rho: SIR must be positive (rho < 1)");
    return std::pow(10.0, -sir_db / 20.0);
}

/// Returns +inf for rho == 0.
inline double rho_to_sir(double rho) {
    if (!(rho >= 0.0)) throw DomainError("rho_to_sir: rho must be non-negative");
    if (rho == 0.0) return std::numeric_limits<double>::infinity();
    if (rho >= 1.0) throw DomainError("rho_to_sir: rho must be below 1");
    return -20.0 * std::log10(rho);
}

/// Single-reflection MPI: for each measured symbol n,
///   y[n] = d[n+D] + V_b + 2 rho sqrt(V_b + d[n+D]) sqrt(V_b + d[n]) B[n]
/// where `levels` carries D = delay_symbols lead-in symbols before the first
/// measured one and `envelope` holds one value per measured symbol.
inline ChannelOutput apply_mpi(std::span<const double> levels, double bias_vb, double rho, std::size_t delay_symbols,
                               std::span<const double> envelope, bool keep_mpi_term = false) {
    if (!(bias_vb > 1.5)) throw DomainError("apply_mpi: bias must exceed 1.5 (negative radicand)");
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("apply_mpi: rho must lie in [0, 1)");
    if (levels.size() != envelope.size() + delay_symbols) {
        throw SizeError("apply_mpi: " + std::to_string(levels.size()) + " levels do not match " +
                        std::to_string(envelope.size()) + " envelope samples plus delay " +
                        std::to_string(delay_symbols));
    }

    const std::size_t count = envelope.size();
    ChannelOutput out;
    out.samples.resize(count);
    out.truth.resize(count);
    if (keep_mpi_term) out.mpi_term.emplace(count, 0.0);

    for (std::size_t n = 0; n < count; ++n) {
        const double d = levels[n + delay_symbols];
        const double shifted = d + 1.5;
        if (shifted != std::floor(shifted) || shifted < 0.0 || shifted > 3.0) {
            throw DomainError("apply_mpi: level " + std::to_string(d) + " is not a PAM4 amplitude");
        }
        out.truth[n] = static_cast<std::uint8_t>(shifted);
        if (rho == 0.0) {
            out.samples[n] = d + bias_vb;
            continue;
        }
        const double mpi = 2.0 * rho * std::sqrt(bias_vb + d) * std::sqrt(bias_vb + levels[n]) * envelope[n];
        out.samples[n] = d + bias_vb + mpi;
        if (keep_mpi_term) (*out.mpi_term)[n] = mpi;
    }
    return out;
}

/// Noise standard deviation for an SNR referenced to the AC data power E[d^2].
inline double awgn_sigma(double snr_db) {
    if (std::isnan(snr_db)) throw DomainError("awgn_sigma: SNR is NaN");
    if (snr_db == std::numeric_limits<double>::infinity()) return 0.0;
    if (!std::isfinite(snr_db)) throw DomainError("awgn_sigma: SNR must be finite or +inf");
    return std::sqrt(kPam4Power / std::pow(10.0, snr_db / 10.0));
}

/// Adds white Gaussian noise. snr_db = +inf leaves the samples untouched.
inline ChannelOutput add_awgn(ChannelOutput output, double snr_db, std::uint64_t seed, bool keep_noise = false) {
    const double sigma = awgn_sigma(snr_db);
    if (keep_noise) output.noise.emplace(output.size(), 0.0);
    if (sigma == 0.0) return output;

    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (std::size_t n = 0; n < output.size(); ++n) {
        const double w = gauss(rng);
        output.samples[n] += w;
        if (keep_noise) (*output.noise)[n] = w;
    }
    return output;
}

}  // namespace mpisim
