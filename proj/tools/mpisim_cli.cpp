// mpisim: command-line front end.
//
//   mpisim run       one simulation point, prints the BER record
//   mpisim sweep     phase-offset x SIR x L/Lc x N grid -> results.csv + SVG plots
//   mpisim waveform  per-symbol received samples against the MPI-shifted levels
//   mpisim plot      regenerate the SVG plots from a results CSV
//
// Every option may also come from a key = value file given with --config
// (lists as `key = a,b,c`); options on the command line win.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical divergence, 4 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mpisim/mpisim.hpp"

namespace {

using namespace mpisim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

struct LinkOptions {
    double phi_over_pi = 0.0;
    double sir_db = 20.0;
    bool no_mpi = false;
    std::optional<double> l_over_lc;
    std::optional<double> length_m;
    std::optional<std::size_t> delay_symbols;
    std::size_t num_symbols = 900'000;
    double snr_db = 18.0;
    std::uint64_t seed = 1;
};

struct PhysicalOptions {
    double baud = 106.25e9;
    double bias = 3.5;
    double linewidth_hz = 5e6;
    double fiber_index = kDefaultFiberIndex;
    std::size_t train_len = 10'000;
    ReceiverSettings rx;
};

void add_physical_options(CLI::App* cmd, PhysicalOptions& o) {
    cmd->add_option("--baud", o.baud, "Symbol rate in Bd")->capture_default_str();
    cmd->add_option("--bias", o.bias, "Bias V_b added to the PAM4 levels (> 1.5)")->capture_default_str();
    cmd->add_option("--linewidth-hz", o.linewidth_hz, "Laser linewidth")->capture_default_str();
    cmd->add_option("--fiber-index", o.fiber_index, "Fiber group index")->capture_default_str();
    cmd->add_option("--train-len", o.train_len, "LMS training symbols")->capture_default_str();
    cmd->add_option("--taps", o.rx.num_taps, "FFE taps (odd)")->capture_default_str();
    cmd->add_option("--step-w", o.rx.step_w, "LMS step for the FFE taps")->capture_default_str();
    cmd->add_option("--step-b", o.rx.step_b, "LMS step for the bias tap")->capture_default_str();
}

void add_link_options(CLI::App* cmd, LinkOptions& o) {
    cmd->add_option("--phi", o.phi_over_pi, "Phase offset in units of pi")->capture_default_str();
    cmd->add_option("--sir-db", o.sir_db, "Signal-to-interference ratio, -20 log10(rho)")->capture_default_str();
    cmd->add_flag("--no-mpi", o.no_mpi, "Disable the reflection (rho = 0)");
    auto* lc = cmd->add_option("--l-over-lc", o.l_over_lc, "Path-length difference in coherence lengths");
    auto* len = cmd->add_option("--length-m", o.length_m, "Round-trip path-length difference in meters");
    auto* ds = cmd->add_option("--delay-symbols", o.delay_symbols, "Reflection delay in whole symbols");
    lc->excludes(len)->excludes(ds);
    len->excludes(ds);
    cmd->add_option("--num-symbols", o.num_symbols, "Measured symbols")->capture_default_str();
    cmd->add_option("--snr-db", o.snr_db, "SNR against the data power E[d^2]; inf disables noise")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
}

LinkConfig make_link(const LinkOptions& o, const PhysicalOptions& p) {
    LinkConfig c;
    c.baud_rate = p.baud;
    c.bias_vb = p.bias;
    c.linewidth_hz = p.linewidth_hz;
    c.fiber_index = p.fiber_index;
    c.train_len = p.train_len;
    c.num_symbols = o.num_symbols;
    c.mpi_enabled = !o.no_mpi;
    c.sir_db = o.sir_db;
    c.phi_rad = o.phi_over_pi * std::numbers::pi;
    c.snr_db = o.snr_db;
    c.master_seed = o.seed;
    if (o.delay_symbols) {
        c.delay = SymbolDelay{*o.delay_symbols};
    } else if (o.length_m) {
        c.delay = PathLength{*o.length_m};
    } else {
        const double ratio = o.l_over_lc.value_or(0.1);
        c.delay = PathLength{ratio == 0.0 ? 0.0 : ratio * coherence_length_m(c.linewidth_hz, c.fiber_index)};
    }
    return c;
}

double l_over_lc_of(const LinkConfig& c) {
    if (c.linewidth_hz <= 0.0) return 0.0;
    const double lc = coherence_length_m(c.linewidth_hz, c.fiber_index);
    if (const auto* p = std::get_if<PathLength>(&c.delay)) return p->meters / lc;
    const double meters = static_cast<double>(std::get<SymbolDelay>(c.delay).symbols) * kSpeedOfLight /
                          (c.fiber_index * c.baud_rate);
    return meters / lc;
}

void print_record(std::ostream& os, const BerRecord& r) {
    const auto& c = r.config;
    os << "phi/pi=" << c.phi_rad / std::numbers::pi << " sir_db=" << (c.mpi_enabled ? c.sir_db : std::numeric_limits<double>::infinity())
       << " snr_db=" << c.snr_db << " delay_symbols=" << c.delay_symbol_count() << " L/Lc=" << l_over_lc_of(c)
       << " N=" << c.num_symbols << " seed=" << r.seed << "\n"
       << "bit_errors=" << r.bit_errors << " total_bits=" << r.total_bits << " ber=" << r.ber << " ci95=["
       << r.ci_low << ", " << r.ci_high << "]\n";
}

int cmd_run(const LinkOptions& lo, const PhysicalOptions& po, const std::string& out, bool diagnostics) {
    const LinkConfig config = make_link(lo, po);
    const auto trace = simulate_point(config, po.rx, diagnostics);
    print_record(std::cout, trace.record);
    if (diagnostics && trace.channel.mpi_term) {
        double sum = 0, sum2 = 0;
        for (double m : *trace.channel.mpi_term) {
            sum += m;
            sum2 += m * m;
        }
        const double n = static_cast<double>(trace.channel.size());
        std::cout << "mpi_term mean=" << sum / n << " rms=" << std::sqrt(sum2 / n) << " final_bias_tap="
                  << trace.equalizer.final_state.b << "\n";
    }
    if (!out.empty()) {
        SweepRecord rec{{}, l_over_lc_of(config), trace.record, 0.0};
        std::ofstream f(out, std::ios::binary);
        if (!f) throw IoError("cannot open " + out + " for writing");
        const std::vector<SweepRecord> recs{rec};
        write_csv(f, canonical_rows(recs));
        if (!f) throw IoError("write failed: " + out);
    }
    return kExitOk;
}

int cmd_waveform(const LinkOptions& lo, const PhysicalOptions& po, const std::string& out, std::size_t first,
                 std::size_t count) {
    const LinkConfig config = make_link(lo, po);
    const auto trace = simulate_point(config, po.rx, true);
    const auto rows = dump_waveform(trace.channel, trace.envelope, config.rho(), config.bias_vb, {first, count});
    if (out.empty() || out == "-") {
        write_waveform_csv(std::cout, rows);
        return kExitOk;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw IoError("cannot open " + out + " for writing");
    write_waveform_csv(f, rows);
    if (!f) throw IoError("write failed: " + out);
    std::cerr << "wrote " << rows.size() << " rows to " << out << "\n";
    return kExitOk;
}

struct SweepOptions {
    std::vector<double> phi_over_pi{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> sir_db{14, 16, 18, 20, 22, 24, 26, 28, 30};
    std::vector<double> l_over_lc{0.1, 1.0, 10.0};
    std::vector<std::size_t> num_symbols{900'000};
    double snr_db = 18.0;
    std::uint64_t seed = 1;
    std::string out = "sweep_out";
    std::size_t parallelism = 1;
    bool diagnostics = false;
    bool no_plots = false;
    bool quiet = false;
};

void write_failure_manifest(const std::filesystem::path& dir, const SweepAborted& e, const SweepGrid& grid) {
    std::vector<CsvRow> rows = canonical_rows(e.partial());
    std::ofstream partial(dir / "results.partial.csv", std::ios::binary);
    write_csv(partial, rows);
    std::ofstream manifest(dir / "failure.txt");
    const auto& c = e.failed_cell();
    manifest << "error: " << e.what() << "\n"
             << "failed_cell: phi_over_pi=" << grid.phi_list[c.phi] / std::numbers::pi
             << " sir_db=" << grid.sir_list_db[c.sir] << " l_over_lc=" << grid.l_over_lc_list[c.regime]
             << " num_symbols=" << grid.num_symbols_list[c.symbols] << "\n"
             << "completed_cells: " << rows.size() << " of " << grid.size() << "\n";
}

int cmd_sweep(const SweepOptions& so, const PhysicalOptions& po) {
    SweepGrid grid;
    grid.phi_list.clear();
    for (double p : so.phi_over_pi) grid.phi_list.push_back(p * std::numbers::pi);
    grid.sir_list_db = so.sir_db;
    grid.l_over_lc_list = so.l_over_lc;
    grid.num_symbols_list = so.num_symbols;
    grid.snr_db = so.snr_db;
    grid.master_seed = so.seed;
    grid.receiver = po.rx;
    grid.base.baud_rate = po.baud;
    grid.base.bias_vb = po.bias;
    grid.base.linewidth_hz = po.linewidth_hz;
    grid.base.fiber_index = po.fiber_index;
    grid.base.train_len = po.train_len;

    const std::filesystem::path dir(so.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    SweepProgress progress;
    if (!so.quiet) {
        progress = [](const SweepRecord& r, std::size_t done, std::size_t total) {
            std::cerr << "[" << done << "/" << total << "] L/Lc=" << r.l_over_lc
                      << " phi/pi=" << r.ber.config.phi_rad / std::numbers::pi << " sir=" << r.ber.config.sir_db
                      << " N=" << r.ber.config.num_symbols << " ber=" << r.ber.ber << "\n";
        };
    }

    SweepResult result;
    try {
        result = run_sweep(grid, so.parallelism, progress);
    } catch (const SweepAborted& e) {
        write_failure_manifest(dir, e, grid);
        throw;
    }
    write_csv(result, dir / "results.csv");
    std::cerr << "wrote " << (dir / "results.csv").string() << " (" << result.records.size() << " rows)\n";

    if (so.diagnostics) {
        std::ofstream t(dir / "timing.csv");
        t << "l_over_lc,phi_over_pi,sir_db,num_symbols,wall_seconds\n";
        for (const auto& r : result.records) {
            t << r.l_over_lc << ',' << r.ber.config.phi_rad / std::numbers::pi << ',' << r.ber.config.sir_db << ','
              << r.ber.config.num_symbols << ',' << r.wall_seconds << '\n';
        }
        if (!t) throw IoError("write failed: " + (dir / "timing.csv").string());
    }
    if (!so.no_plots) {
        const auto rows = canonical_rows(result.records);
        for (const auto& p : emit_plots(rows, dir)) std::cerr << "wrote " << p.string() << "\n";
    }
    return kExitOk;
}

// CLI11 reads config files only on the top-level app, so subcommands load
// theirs after parsing. Options already given on the command line are kept.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    CLI::ConfigINI reader;
    for (const auto& item : reader.from_config(in)) {
        if (item.name == "++" || item.name == "--") continue;
        CLI::Option* opt = item.parents.empty() ? cmd->get_option_no_throw("--" + item.name) : nullptr;
        if (opt == nullptr || item.name == "config") {
            throw CLI::ConfigError("unknown key '" + item.fullname() + "' in " + path);
        }
        if (opt->count() > 0) continue;
        opt->add_result(item.inputs);
        opt->run_callback();
    }
}

int cmd_plot(const std::string& csv, const std::string& out) {
    const auto rows = read_csv(std::filesystem::path(csv));
    for (const auto& p : emit_plots(rows, out)) std::cerr << "wrote " << p.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo multipath-interference simulator for PAM4 IM/DD links"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    LinkOptions link;
    PhysicalOptions phys;
    std::string run_out;
    bool run_diag = false;
    std::string config_path;
    auto* run = app.add_subcommand("run", "Simulate one point and print its BER record");
    run->add_option("--config", config_path, "key = value configuration file");
    add_link_options(run, link);
    add_physical_options(run, phys);
    run->add_option("--out", run_out, "Also write the record as a one-row results CSV");
    run->add_flag("--diagnostics", run_diag, "Print MPI-term statistics");

    SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter grid, write results.csv and plots");
    sweep->add_option("--config", config_path, "key = value configuration file");
    sweep->add_option("--phi", sweep_opts.phi_over_pi, "Phase offsets in units of pi")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--sir-db", sweep_opts.sir_db, "SIR values (dB)")->delimiter(',')->capture_default_str();
    sweep->add_option("--l-over-lc", sweep_opts.l_over_lc, "Path-length differences in coherence lengths")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--num-symbols", sweep_opts.num_symbols, "Measured symbols per point")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--snr-db", sweep_opts.snr_db, "SNR against the data power E[d^2]")->capture_default_str();
    sweep->add_option("--seed", sweep_opts.seed, "Master seed")->capture_default_str();
    sweep->add_option("--out", sweep_opts.out, "Output directory")->capture_default_str();
    sweep->add_option("--parallelism", sweep_opts.parallelism, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_flag("--diagnostics", sweep_opts.diagnostics, "Also write per-point wall-clock timing.csv");
    sweep->add_flag("--no-plots", sweep_opts.no_plots, "Skip SVG output");
    sweep->add_flag("--quiet", sweep_opts.quiet, "No per-point progress on stderr");
    add_physical_options(sweep, phys);

    std::string wave_out;
    std::size_t wave_first = 20'000, wave_count = 2'000;
    auto* wave = app.add_subcommand("waveform", "Dump received samples and MPI-shifted reference levels");
    wave->add_option("--config", config_path, "key = value configuration file");
    add_link_options(wave, link);
    add_physical_options(wave, phys);
    wave->add_option("--first", wave_first, "First measured symbol of the window")->capture_default_str();
    wave->add_option("--count", wave_count, "Window length in symbols")->capture_default_str();
    wave->add_option("--out", wave_out, "CSV output file ('-' for stdout)");
    wave->add_flag("--diagnostics", "Accepted for symmetry; the waveform dump always keeps diagnostics");

    std::string plot_csv, plot_out = ".";
    auto* plot = app.add_subcommand("plot", "Regenerate SVG plots from a results CSV");
    plot->add_option("--csv", plot_csv, "results.csv written by sweep")->required();
    plot->add_option("--out", plot_out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            for (auto* sub : {run, sweep, wave})
                if (*sub) apply_config_file(sub, config_path);
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        app.exit(e);
        return kExitIo;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) return cmd_run(link, phys, run_out, run_diag);
        if (*sweep) return cmd_sweep(sweep_opts, phys);
        if (*wave) return cmd_waveform(link, phys, wave_out, wave_first, wave_count);
        if (*plot) return cmd_plot(plot_csv, plot_out);
    } catch (const PointFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == FailureKind::divergence ? kExitDivergence : kExitConfig;
    } catch (const SweepAborted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == FailureKind::divergence ? kExitDivergence : kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
