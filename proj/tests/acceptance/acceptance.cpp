// Acceptance suite. One PASS/FAIL line per criterion; exit status 1 if any fail.
// Points in criteria 3-5 and 7 use the default sweep grid cells, so their
// seeds are the ones a default sweep produces.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mpisim/mpisim.hpp"

using namespace mpisim;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << "  " << detail << std::endl;
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

bool overlap(const BerRecord& a, const BerRecord& b) { return a.ci_low <= b.ci_high && b.ci_low <= a.ci_high; }

std::size_t index_of(const std::vector<double>& v, double x) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i] - x) < 1e-12) return i;
    throw std::runtime_error("value not in grid");
}

// Default-grid point, optionally with a different symbol count.
BerRecord grid_point(const SweepGrid& grid, double phi, double sir, double ratio) {
    const GridCell cell{index_of(grid.phi_list, phi), index_of(grid.sir_list_db, sir),
                        index_of(grid.l_over_lc_list, ratio), 0};
    return run_point(cell_config(grid, cell), grid.receiver);
}

void wiener_law() {
    const auto t0 = std::chrono::steady_clock::now();
    const double ts = 1.0 / 106.25e9;
    const double step = wiener_step_variance(5e6, ts);
    const PhasePath path = wiener_phase(1'000'000, 5e6, ts, 1 + seed_offset::phase);
    bool ok = true;
    std::string detail;
    for (std::size_t k : {1u, 10u, 677u}) {
        const auto diff = delayed_difference(path, k);
        double mean = 0;
        for (double d : diff) mean += d;
        mean /= static_cast<double>(diff.size());
        double var = 0;
        for (double d : diff) var += (d - mean) * (d - mean);
        var /= static_cast<double>(diff.size() - 1);
        const double rel = var / (static_cast<double>(k) * step) - 1.0;
        ok = ok && std::abs(rel) <= 0.05;
        detail += "k=" + std::to_string(k) + " rel_err=" + fmt(rel) + " ";
    }
    const double t = seconds_since(t0);
    ok = ok && t < 5.0;
    report(1, "wiener-variance", ok, detail + "time=" + fmt(t) + "s");
}

void awgn_baseline() {
    const auto t0 = std::chrono::steady_clock::now();
    LinkConfig c;
    c.mpi_enabled = false;
    c.snr_db = 18.0;
    c.num_symbols = 9'000'000;
    const BerRecord r = run_point(c);
    const double t = seconds_since(t0);
    const double sigma = awgn_sigma(18.0);
    const double analytic = 0.75 * 0.5 * std::erfc(0.5 / sigma / std::numbers::sqrt2);
    const double ratio = r.ber / analytic;
    const bool ok = ratio >= 0.5 && ratio <= 2.0 && t < 60.0;
    report(2, "awgn-baseline", ok,
           "ber=" + fmt(r.ber) + " analytic=" + fmt(analytic) + " ratio=" + fmt(ratio) + " time=" + fmt(t) + "s");
}

struct OrderingResult {
    int held = 0;
    std::string detail;
};

OrderingResult coherent_ordering(const SweepGrid& grid) {
    OrderingResult out;
    for (double sir : {16.0, 20.0, 24.0}) {
        const auto a = grid_point(grid, 0.0, sir, 0.1);
        const auto b = grid_point(grid, std::numbers::pi, sir, 0.1);
        const bool ok = b.ber > a.ber && b.ci_low > a.ci_high;
        out.held += ok;
        out.detail += "sir=" + fmt(sir) + " ber0=" + fmt(a.ber) + " berpi=" + fmt(b.ber) + (ok ? " ok " : " X ");
    }
    return out;
}

void regime_criteria(const SweepGrid& grid) {
    const auto o = coherent_ordering(grid);
    report(3, "coherent-ordering", o.held == 3, o.detail);

    // L = 10 L_c: all five phase offsets at every SIR.
    std::map<std::pair<std::size_t, std::size_t>, BerRecord> far;
    for (std::size_t s = 0; s < grid.sir_list_db.size(); ++s)
        for (std::size_t p = 0; p < grid.phi_list.size(); ++p)
            far[{p, s}] = run_point(cell_config(grid, {p, s, 2, 0}), grid.receiver);
    int bad_pairs = 0, pairs = 0;
    std::string worst;
    for (std::size_t s = 0; s < grid.sir_list_db.size(); ++s) {
        for (std::size_t p = 0; p < grid.phi_list.size(); ++p)
            for (std::size_t q = p + 1; q < grid.phi_list.size(); ++q) {
                ++pairs;
                if (!overlap(far[{p, s}], far[{q, s}])) {
                    ++bad_pairs;
                    if (bad_pairs <= 3)
                        worst += " [sir=" + fmt(grid.sir_list_db[s]) + " phi/pi " + fmt(grid.phi_list[p] / std::numbers::pi) +
                                 " vs " + fmt(grid.phi_list[q] / std::numbers::pi) + "]";
                }
            }
    }
    report(4, "decorrelated-overlap", bad_pairs == 0,
           std::to_string(pairs - bad_pairs) + "/" + std::to_string(pairs) + " pairs overlap" + worst);

    const std::size_t s20 = index_of(grid.sir_list_db, 20.0);
    const std::size_t pi_i = index_of(grid.phi_list, std::numbers::pi);
    auto ratio_at = [&](double l) {
        const auto a = grid_point(grid, 0.0, 20.0, l);
        const auto b = grid_point(grid, std::numbers::pi, 20.0, l);
        return b.ber / a.ber;
    };
    const double r_near = ratio_at(0.1);
    const double r_mid = ratio_at(1.0);
    const double r_far = far[{pi_i, s20}].ber / far[{0, s20}].ber;
    const bool ok5 = std::min(r_near, r_far) < r_mid && r_mid < std::max(r_near, r_far);
    report(5, "intermediate-regime", ok5,
           "ratio(0.1)=" + fmt(r_near) + " ratio(1)=" + fmt(r_mid) + " ratio(10)=" + fmt(r_far));
}

void symbol_count_stability(const SweepGrid& grid) {
    SweepGrid small = grid;
    small.num_symbols_list = {230'000};
    const auto o = coherent_ordering(small);
    report(7, "symbol-count-stability", o.held >= 2, std::to_string(o.held) + "/3 " + o.detail);
}

void dilation_contraction() {
    const double rho = 0.1;
    const double expected_dev = predicted_spacing(rho, 3.5, Extreme::dilate) - 1.0;
    bool ok = true;
    std::string detail = "predicted=1+-" + fmt(expected_dev);
    for (double phi : {0.0, std::numbers::pi}) {
        LinkConfig c;
        c.linewidth_hz = 1e5;
        c.snr_db = std::numeric_limits<double>::infinity();
        c.sir_db = rho_to_sir(rho);
        c.phi_rad = phi;
        c.bias_vb = 3.5;
        c.delay = PathLength{1.30};
        c.num_symbols = 200'000;
        const auto trace = simulate_point(c);
        double sum[4]{}, cnt[4]{};
        for (std::size_t n = 0; n < trace.channel.size(); ++n) {
            sum[trace.channel.truth[n]] += trace.channel.samples[n];
            cnt[trace.channel.truth[n]] += 1;
        }
        const double spacing = sum[3] / cnt[3] - sum[2] / cnt[2];
        const double target = phi == 0.0 ? expected_dev : -expected_dev;
        const double rel = (spacing - 1.0 - target) / expected_dev;
        ok = ok && std::abs(rel) <= 0.10;
        detail += " phi/pi=" + fmt(phi / std::numbers::pi) + " spacing=" + fmt(spacing) + " rel_err=" + fmt(rel);
    }
    report(6, "dilation-contraction", ok, detail);
}

void reproducibility() {
    SweepGrid grid;
    grid.num_symbols_list = {230'000};
    auto csv_of = [](const SweepResult& r) {
        std::ostringstream os;
        write_csv(os, canonical_rows(r.records));
        return os.str();
    };
    auto t0 = std::chrono::steady_clock::now();
    const std::string serial = csv_of(run_sweep(grid, 1));
    const double t_serial = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const std::string parallel = csv_of(run_sweep(grid, 8));
    const double t_parallel = seconds_since(t0);
    const bool ok = serial == parallel && t_serial < 600.0 && t_parallel < 600.0;
    report(8, "reproducibility", ok,
           std::string(serial == parallel ? "identical" : "DIFFERENT") + " csv, " + std::to_string(grid.size()) +
               " points, time p1=" + fmt(t_serial) + "s p8=" + fmt(t_parallel) + "s");
}

}  // namespace

int main() {
    const SweepGrid grid;
    try {
        wiener_law();
        awgn_baseline();
        regime_criteria(grid);
        dilation_contraction();
        symbol_count_stability(grid);
        reproducibility();
    } catch (const std::exception& e) {
        std::cout << "FAIL  aborted: " << e.what() << std::endl;
        return 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
