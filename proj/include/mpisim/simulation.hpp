#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpisim/channel.hpp"
#include "mpisim/equalizer.hpp"
#include "mpisim/errors.hpp"
#include "mpisim/link_config.hpp"
#include "mpisim/metrics.hpp"
#include "mpisim/phase_noise.hpp"
#include "mpisim/random.hpp"
#include "mpisim/signal_model.hpp"

namespace mpisim {

/// Receiver settings not carried by LinkConfig (train_len and the bias tap
/// start come from the link).
struct ReceiverSettings {
    std::size_t num_taps = 15;
    double step_w = 2e-4;
    double step_b = 1e-2;
    double divergence_guard = 1e6;

    friend bool operator==(const ReceiverSettings&, const ReceiverSettings&) = default;
};

inline EqualizerConfig equalizer_config_for(const LinkConfig& link, const ReceiverSettings& rx) {
    EqualizerConfig eq;
    eq.num_taps = rx.num_taps;
    eq.step_w = rx.step_w;
    eq.step_b = rx.step_b;
    eq.divergence_guard = rx.divergence_guard;
    eq.train_len = link.train_len;
    eq.initial_bias = -link.bias_vb;
    return eq;
}

enum class FailureKind { config, divergence, numeric };

/// A simulation point failed; carries the configuration that produced it.
class PointFailure : public Error {
public:
    PointFailure(const LinkConfig& config, FailureKind kind, const std::string& what)
        : Error(what), config_(config), kind_(kind) {}

    const LinkConfig& config() const noexcept { return config_; }
    FailureKind kind() const noexcept { return kind_; }

private:
    LinkConfig config_;
    FailureKind kind_;
};

/// Everything produced while simulating one point; kept for waveform dumps.
struct PointTrace {
    std::size_t delay_symbols = 0;
    std::vector<double> envelope;   ///< B[n] per measured symbol
    ChannelOutput channel;
    EqualizerResult equalizer;
    BerRecord record;
};

/// Symbols -> Wiener phase -> delayed phase difference -> envelope ->
/// MPI -> AWGN -> FFE/LMS -> bit-error count. Sub-streams use
/// master_seed + seed_offset::{symbols, phase, noise}. The first
/// max(train_len, delay) measured symbols are excluded from the count.
inline PointTrace simulate_point(const LinkConfig& config, const ReceiverSettings& rx = {}, bool diagnostics = false) {
    try {
        config.validate();
        const std::size_t delay = config.delay_symbol_count();
        const std::size_t measured = config.num_symbols;
        const std::size_t total = measured + delay;
        const std::uint64_t seed = config.master_seed;

        PointTrace trace;
        trace.delay_symbols = delay;

        const SymbolStream symbols = generate_symbols(total, seed + seed_offset::symbols);
        {
            const PhasePath path =
                wiener_phase(total, config.linewidth_hz, config.symbol_period(), seed + seed_offset::phase);
            trace.envelope = delayed_difference(path, delay, measured);
        }
        for (double& v : trace.envelope) v = envelope_b(config.phi_rad, v);

        trace.channel = add_awgn(apply_mpi(symbols.levels, config.bias_vb, config.rho(), delay, trace.envelope,
                                           diagnostics),
                                 config.snr_db, seed + seed_offset::noise, diagnostics);

        const std::span<const double> known = std::span<const double>(symbols.levels).subspan(delay);
        trace.equalizer = equalize(trace.channel, equalizer_config_for(config, rx), known);

        const std::size_t skip = std::max(config.train_len, delay);
        trace.record = count_bit_errors(trace.channel.truth, trace.equalizer.decisions, skip);
        trace.record.config = config;
        trace.record.seed = seed;
        if (!diagnostics) {
            trace.envelope.clear();
            trace.envelope.shrink_to_fit();
        }
        return trace;
    } catch (const ConfigError& e) {
        throw PointFailure(config, FailureKind::config, e.what());
    } catch (const DivergenceError& e) {
        throw PointFailure(config, FailureKind::divergence, e.what());
    } catch (const PointFailure&) {
        throw;
    } catch (const Error& e) {
        throw PointFailure(config, FailureKind::numeric, e.what());
    }
}

inline BerRecord run_point(const LinkConfig& config, const ReceiverSettings& rx = {}) {
    return simulate_point(config, rx).record;
}

}  // namespace mpisim
