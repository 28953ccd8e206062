#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mpisim/channel.hpp"
#include "mpisim/errors.hpp"
#include "mpisim/link_config.hpp"
#include "mpisim/signal_model.hpp"

namespace mpisim {

struct BerRecord {
    std::uint64_t bit_errors = 0;
    std::uint64_t total_bits = 0;
    std::uint64_t measured_symbols = 0;
    double ber = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    LinkConfig config;       ///< configuration that produced the record
    std::uint64_t seed = 0;  ///< seed the point actually ran with
};

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// 95% Wilson score interval for `errors` successes out of `bits` trials.
inline Interval ber_confidence(std::uint64_t errors, std::uint64_t bits) {
    if (bits == 0) throw DomainError("ber_confidence: no bits observed");
    if (errors > bits) throw DomainError("ber_confidence: more errors than bits");
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(bits);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (errors == 0) ci.low = 0.0;
    if (errors == bits) ci.high = 1.0;
    ci.low = std::min(ci.low, p);
    ci.high = std::max(ci.high, p);
    return ci;
}

/// Gray-decodes both index streams and counts differing bits, ignoring the
/// first `skip` symbols.
inline BerRecord count_bit_errors(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx,
                                  std::size_t skip = 0) {
    if (tx.size() != rx.size()) {
        throw SizeError("count_bit_errors: " + std::to_string(tx.size()) + " transmitted vs " +
                        std::to_string(rx.size()) + " received symbols");
    }
    if (skip >= tx.size()) throw SizeError("count_bit_errors: every symbol is skipped");
    std::uint64_t errors = 0;
    for (std::size_t n = skip; n < tx.size(); ++n) {
        errors += static_cast<std::uint64_t>(hamming_distance(gray_map(tx[n]), gray_map(rx[n])));
    }
    BerRecord r;
    r.measured_symbols = tx.size() - skip;
    r.total_bits = 2 * r.measured_symbols;
    r.bit_errors = errors;
    r.ber = static_cast<double>(errors) / static_cast<double>(r.total_bits);
    const auto ci = ber_confidence(errors, r.total_bits);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    return r;
}

enum class Extreme { dilate, contract };

/// Spacing of the top two received levels when the reflection phase sits at
/// B = +1 (dilate) or B = -1 (contract), with the cross term averaged to sqrt(V_b):
///   1 +/- 2 rho sqrt(V_b) (sqrt(V_b + 1.5) - sqrt(V_b + 0.5)).
inline double predicted_spacing(double rho, double bias_vb, Extreme extreme) {
    if (!(bias_vb > 1.5)) throw DomainError("predicted_spacing: bias must exceed 1.5");
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("predicted_spacing: rho must lie in [0, 1)");
    const double delta = 2.0 * rho * std::sqrt(bias_vb) * (std::sqrt(bias_vb + 1.5) - std::sqrt(bias_vb + 0.5));
    return extreme == Extreme::dilate ? 1.0 + delta : 1.0 - delta;
}

/// MPI-shifted PAM4 levels D_i + V_b + 2 rho sqrt(V_b + D_i) sqrt(V_b) b_bar.
inline std::array<double, 4> reference_levels(double rho, double bias_vb, double b_bar) {
    if (!(bias_vb > 1.5)) throw DomainError("reference_levels: bias must exceed 1.5");
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("reference_levels: rho must lie in [0, 1)");
    if (!(b_bar >= -1.0 && b_bar <= 1.0)) throw DomainError("reference_levels: b_bar must lie in [-1, 1]");
    std::array<double, 4> r{};
    const double sv = std::sqrt(bias_vb);
    for (std::size_t i = 0; i < 4; ++i) {
        const double d = kPam4Levels[i];
        r[i] = d + bias_vb + 2.0 * rho * std::sqrt(bias_vb + d) * sv * b_bar;
    }
    return r;
}

struct WaveformWindow {
    std::size_t first = 0;
    std::size_t count = 0;
};

struct WaveformRow {
    std::size_t n = 0;
    double y = 0.0;
    double truth_level = 0.0;  ///< biased transmitted level d[n] + V_b
    std::array<double, 4> reference{};
};

/// Per-symbol table of received samples against the reference levels
/// evaluated with the instantaneous envelope B[n].
inline std::vector<WaveformRow> dump_waveform(const ChannelOutput& output, std::span<const double> envelope,
                                              double rho, double bias_vb, WaveformWindow window) {
    if (envelope.size() != output.size()) throw SizeError("dump_waveform: envelope does not match the output");
    if (window.count == 0 || window.first > output.size() || window.count > output.size() - window.first) {
        throw SizeError("dump_waveform: window [" + std::to_string(window.first) + ", +" +
                        std::to_string(window.count) + ") outside " + std::to_string(output.size()) + " symbols");
    }
    std::vector<WaveformRow> rows;
    rows.reserve(window.count);
    for (std::size_t n = window.first; n < window.first + window.count; ++n) {
        rows.push_back({n, output.samples[n], kPam4Levels[output.truth[n]] + bias_vb,
                        reference_levels(rho, bias_vb, envelope[n])});
    }
    return rows;
}

inline void write_waveform_csv(std::ostream& os, std::span<const WaveformRow> rows) {
    os << "n,y,truth_level,r0,r1,r2,r3\n";
    os.precision(17);
    for (const auto& r : rows) {
        os << r.n << ',' << r.y << ',' << r.truth_level;
        for (double v : r.reference) os << ',' << v;
        os << '\n';
    }
}

}  // namespace mpisim
