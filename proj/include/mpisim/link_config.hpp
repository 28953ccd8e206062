#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include "mpisim/channel.hpp"
#include "mpisim/errors.hpp"
#include "mpisim/phase_noise.hpp"

namespace mpisim {

/// Round-trip path-length difference in meters.
struct PathLength {
    double meters = 0.0;
    friend bool operator==(const PathLength&, const PathLength&) = default;
};

/// Reflection delay given directly in whole symbols.
struct SymbolDelay {
    std::size_t symbols = 0;
    friend bool operator==(const SymbolDelay&, const SymbolDelay&) = default;
};

using DelaySpec = std::variant<PathLength, SymbolDelay>;

/// One simulation point. Defaults are the 200G/lane operating point:
/// 106.25 GBaud, V_b = 3.5 (ER ~ 4 dB), 5 MHz linewidth, SNR 18 dB.
struct LinkConfig {
    double baud_rate = 106.25e9;
    std::size_t num_symbols = 900'000;
    double bias_vb = 3.5;
    double linewidth_hz = 5e6;
    double fiber_index = kDefaultFiberIndex;
    bool mpi_enabled = true;
    double sir_db = 20.0;
    double phi_rad = 0.0;
    DelaySpec delay = PathLength{1.30};
    double snr_db = 18.0;  ///< +inf disables noise
    std::size_t train_len = 10'000;
    std::uint64_t master_seed = 1;

    double symbol_period() const { return 1.0 / baud_rate; }

    double rho() const { return mpi_enabled ? sir_to_rho(sir_db) : 0.0; }

    std::size_t delay_symbol_count() const {
        return std::visit(
            [&](const auto& d) -> std::size_t {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, SymbolDelay>) {
                    return d.symbols;
                } else {
                    return delay_symbols(d.meters, fiber_index, baud_rate);
                }
            },
            delay);
    }

    void validate() const {
        if (!(baud_rate > 0.0) || !std::isfinite(baud_rate)) throw ConfigError("baud_rate must be positive");
        if (!(bias_vb > 1.5) || !std::isfinite(bias_vb)) throw ConfigError("bias_vb must exceed 1.5");
        if (!(linewidth_hz >= 0.0) || !std::isfinite(linewidth_hz)) throw ConfigError("linewidth_hz must be >= 0");
        if (!(fiber_index >= 1.0)) throw ConfigError("fiber_index must be >= 1");
        if (!std::isfinite(phi_rad)) throw ConfigError("phi_rad must be finite");
        if (std::isnan(snr_db) || (std::isinf(snr_db) && snr_db < 0.0)) throw ConfigError("snr_db must be finite or +inf");
        if (mpi_enabled) {
            if (!(sir_db > 0.0) || !std::isfinite(sir_db)) {
                throw ConfigError("sir_db must be positive and finite when MPI is on (rho in (0, 1))");
            }
        }
        if (const auto* p = std::get_if<PathLength>(&delay); p && !(p->meters >= 0.0)) {
            throw ConfigError("path length must be non-negative");
        }
        const std::size_t d = delay_symbol_count();
        if (num_symbols <= train_len + d) {
            throw ConfigError("num_symbols (" + std::to_string(num_symbols) + ") must exceed train_len + delay (" +
                              std::to_string(train_len + d) + ")");
        }
    }

    friend bool operator==(const LinkConfig&, const LinkConfig&) = default;
};

}  // namespace mpisim
