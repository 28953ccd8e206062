#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpisim/channel.hpp"
#include "mpisim/errors.hpp"
#include "mpisim/signal_model.hpp"

namespace mpisim {

struct EqualizerConfig {
    std::size_t num_taps = 15;
    double step_w = 2e-4;
    double step_b = 1e-2;
    std::size_t train_len = 10'000;
    /// Starting value of the bias tap. Reference levels are zero-mean, so
    /// -V_b pre-cancels the optical bias.
    double initial_bias = 0.0;
    /// Starting tap weights; empty means a unit center tap.
    std::vector<double> initial_taps;
    double divergence_guard = 1e6;

    void validate() const {
        if (num_taps == 0 || num_taps % 2 == 0) throw ConfigError("equalizer: num_taps must be odd and >= 1");
        if (!(step_w > 0.0) || !(step_b > 0.0)) throw ConfigError("equalizer: LMS steps must be positive");
        if (train_len < num_taps) throw ConfigError("equalizer: train_len must be >= num_taps");
        if (!(divergence_guard > 0.0)) throw ConfigError("equalizer: divergence guard must be positive");
        if (!initial_taps.empty() && initial_taps.size() != num_taps) {
            throw ConfigError("equalizer: initial_taps must hold num_taps weights");
        }
    }
};

struct EqualizerState {
    std::vector<double> w;
    double b = 0.0;
};

struct EqualizerResult {
    std::vector<std::uint8_t> decisions;
    std::vector<double> soft;
    EqualizerState final_state;
    std::size_t train_len = 0;  ///< decisions[0, train_len) were made in training mode
};

/// FFE output for a window ordered newest sample first.
inline double ffe_output(const EqualizerState& state, std::span<const double> window) noexcept {
    double acc = state.b;
    for (std::size_t k = 0; k < state.w.size(); ++k) acc += state.w[k] * window[k];
    return acc;
}

/// One LMS step: w += step_w * e * window, b += step_b * e.
inline void lms_update(EqualizerState& state, std::span<const double> window, double error, double step_w,
                       double step_b) noexcept {
    const double ge = step_w * error;
    for (std::size_t k = 0; k < state.w.size(); ++k) state.w[k] += ge * window[k];
    state.b += step_b * error;
}

/// Nearest PAM4 level; exact midpoints (-1, 0, +1) go to the higher level.
inline unsigned slicer(double soft) {
    if (!std::isfinite(soft)) throw DomainError("slicer: non-finite soft value");
    if (soft < -1.0) return 0;
    if (soft < 0.0) return 1;
    if (soft < 1.0) return 2;
    return 3;
}

template <class R>
concept SampleSequence = requires(const R& r, std::size_t i) {
    { r.size() } -> std::convertible_to<std::size_t>;
    { r[i] } -> std::convertible_to<double>;
};

struct NoSymbolHook {
    constexpr void operator()(std::size_t) const noexcept {}
};

/// Feed-forward LMS equalizer with an additive bias tap, no decision feedback.
///
/// soft[n] = sum_k w[k] * y[n + c - k] + b, with c = num_taps / 2 and
/// out-of-range samples taken as zero. The error is referenced to the known
/// level for n < train_len and to the sliced decision afterwards. Input
/// samples are read strictly in order, each once, the newest being y[n + c]
/// while symbol n is processed. `on_symbol(n)` runs before symbol n.
template <SampleSequence Input, class Hook = NoSymbolHook>
EqualizerResult equalize(const Input& y, const EqualizerConfig& config, std::span<const double> known,
                         Hook&& on_symbol = {}) {
    config.validate();
    const std::size_t count = y.size();
    const std::size_t taps = config.num_taps;
    const std::size_t center = taps / 2;
    if (count <= config.train_len) {
        throw SizeError("equalize: " + std::to_string(count) + " samples do not exceed train_len " +
                        std::to_string(config.train_len));
    }
    if (known.size() < config.train_len) throw SizeError("equalize: known sequence shorter than train_len");

    EqualizerResult res;
    res.train_len = config.train_len;
    res.decisions.resize(count);
    res.soft.resize(count);
    auto& state = res.final_state;
    if (config.initial_taps.empty()) {
        state.w.assign(taps, 0.0);
        state.w[center] = 1.0;
    } else {
        state.w = config.initial_taps;
    }
    state.b = config.initial_bias;

    // Delay line stored twice so that line[head .. head + taps) is always
    // contiguous; element 0 is the newest sample.
    std::vector<double> line(2 * taps, 0.0);
    std::size_t head = 0;
    auto push = [&](double v) {
        head = (head + taps - 1) % taps;
        line[head] = v;
        line[head + taps] = v;
    };
    for (std::size_t i = 0; i < center && i < count; ++i) push(static_cast<double>(y[i]));
    for (std::size_t i = count; i < center; ++i) push(0.0);

    const double guard = config.divergence_guard;
    for (std::size_t n = 0; n < count; ++n) {
        on_symbol(n);
        const std::size_t next = n + center;
        push(next < count ? static_cast<double>(y[next]) : 0.0);
        const std::span<const double> x(line.data() + head, taps);

        const double acc = ffe_output(state, x);
        if (!(std::abs(acc) <= guard)) throw DivergenceError(n, "equalizer output diverged");

        const unsigned decision = slicer(acc);
        const double ref = n < config.train_len ? known[n] : kPam4Levels[decision];
        lms_update(state, x, ref - acc, config.step_w, config.step_b);
        if (!(std::abs(state.b) <= guard)) throw DivergenceError(n, "equalizer bias tap diverged");
        for (double wk : state.w) {
            if (!(std::abs(wk) <= guard)) throw DivergenceError(n, "equalizer tap diverged");
        }

        res.soft[n] = acc;
        res.decisions[n] = static_cast<std::uint8_t>(decision);
    }
    return res;
}

inline EqualizerResult equalize(const ChannelOutput& y, const EqualizerConfig& config, std::span<const double> known) {
    return equalize(std::span<const double>(y.samples), config, known);
}

}  // namespace mpisim
