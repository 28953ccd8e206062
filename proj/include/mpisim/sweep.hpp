#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <tuple>
#include <vector>

#include "mpisim/errors.hpp"
#include "mpisim/link_config.hpp"
#include "mpisim/metrics.hpp"
#include "mpisim/phase_noise.hpp"
#include "mpisim/random.hpp"
#include "mpisim/simulation.hpp"

namespace mpisim {

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr std::string_view kCsvHeader =
    "l_over_lc,phi_over_pi,sir_db,snr_db,num_symbols,seed,bit_errors,total_bits,ber,ci_low,ci_high";

struct SweepGrid {
    std::vector<double> phi_list{0.0, std::numbers::pi / 4, std::numbers::pi / 2, 3 * std::numbers::pi / 4,
                                 std::numbers::pi};
    std::vector<double> sir_list_db{14, 16, 18, 20, 22, 24, 26, 28, 30};
    std::vector<double> l_over_lc_list{0.1, 1.0, 10.0};
    std::vector<std::size_t> num_symbols_list{900'000};
    double snr_db = 18.0;
    LinkConfig base;
    ReceiverSettings receiver;
    std::uint64_t master_seed = 1;

    std::size_t size() const noexcept {
        return phi_list.size() * sir_list_db.size() * l_over_lc_list.size() * num_symbols_list.size();
    }

    void validate() const {
        if (phi_list.empty() || sir_list_db.empty() || l_over_lc_list.empty() || num_symbols_list.empty()) {
            throw ConfigError("sweep grid lists must be non-empty");
        }
        for (double r : l_over_lc_list) {
            if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("l_over_lc values must be finite and >= 0");
        }
    }
};

/// Grid coordinates of one sweep point.
struct GridCell {
    std::size_t phi = 0;
    std::size_t sir = 0;
    std::size_t regime = 0;
    std::size_t symbols = 0;
};

/// Seed of one cell: SplitMix64 hash of the master seed with
/// (phi index, SIR index, regime index, symbol-count index).
inline std::uint64_t cell_seed(std::uint64_t master_seed, const GridCell& cell) {
    return hash_seed(master_seed, {cell.phi, cell.sir, cell.regime, cell.symbols});
}

inline std::vector<GridCell> grid_cells(const SweepGrid& grid) {
    std::vector<GridCell> cells;
    cells.reserve(grid.size());
    for (std::size_t r = 0; r < grid.l_over_lc_list.size(); ++r)
        for (std::size_t m = 0; m < grid.num_symbols_list.size(); ++m)
            for (std::size_t p = 0; p < grid.phi_list.size(); ++p)
                for (std::size_t s = 0; s < grid.sir_list_db.size(); ++s) cells.push_back({p, s, r, m});
    return cells;
}

/// Link configuration of one cell. The path length is l_over_lc * L_c for
/// the base linewidth and group index.
inline LinkConfig cell_config(const SweepGrid& grid, const GridCell& cell) {
    LinkConfig c = grid.base;
    c.phi_rad = grid.phi_list.at(cell.phi);
    c.sir_db = grid.sir_list_db.at(cell.sir);
    c.snr_db = grid.snr_db;
    c.num_symbols = grid.num_symbols_list.at(cell.symbols);
    const double ratio = grid.l_over_lc_list.at(cell.regime);
    c.delay = PathLength{ratio == 0.0 ? 0.0 : ratio * coherence_length_m(c.linewidth_hz, c.fiber_index)};
    c.master_seed = cell_seed(grid.master_seed, cell);
    return c;
}

struct SweepRecord {
    GridCell cell;
    double l_over_lc = 0.0;
    BerRecord ber;
    double wall_seconds = 0.0;
};

struct SweepResult {
    std::vector<SweepRecord> records;  ///< in grid_cells() order
    SweepGrid grid;
    std::string version{kVersion};
};

/// A sweep stopped on a failing cell. Holds every record completed before
/// the abort.
class SweepAborted : public Error {
public:
    SweepAborted(const std::string& what, GridCell failed, FailureKind kind, std::vector<SweepRecord> partial)
        : Error(what), failed_(failed), kind_(kind), partial_(std::move(partial)) {}

    const GridCell& failed_cell() const noexcept { return failed_; }
    FailureKind kind() const noexcept { return kind_; }
    const std::vector<SweepRecord>& partial() const noexcept { return partial_; }

private:
    GridCell failed_;
    FailureKind kind_;
    std::vector<SweepRecord> partial_;
};

using SweepProgress = std::function<void(const SweepRecord&, std::size_t done, std::size_t total)>;

/// Runs every grid cell on a pool of `parallelism` workers. Results do not
/// depend on the worker count or on scheduling. `progress` is called
/// serialized, in completion order.
inline SweepResult run_sweep(const SweepGrid& grid, std::size_t parallelism = 1, const SweepProgress& progress = {}) {
    if (parallelism == 0) throw ConfigError("parallelism must be >= 1");
    grid.validate();
    const auto cells = grid_cells(grid);

    std::vector<std::optional<SweepRecord>> slots(cells.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::mutex error_mutex;
    std::mutex progress_mutex;
    std::size_t done = 0;
    std::optional<std::tuple<std::string, GridCell, FailureKind>> first_error;

    auto worker = [&] {
        while (!abort.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const GridCell& cell = cells[i];
            try {
                const LinkConfig config = cell_config(grid, cell);
                const auto start = std::chrono::steady_clock::now();
                BerRecord rec = run_point(config, grid.receiver);
                const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
                slots[i] = SweepRecord{cell, grid.l_over_lc_list[cell.regime], std::move(rec), elapsed.count()};
                if (progress) {
                    std::lock_guard lock(progress_mutex);
                    progress(*slots[i], ++done, cells.size());
                }
            } catch (const PointFailure& e) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error.emplace(e.what(), cell, e.kind());
                abort = true;
            } catch (const Error& e) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error.emplace(e.what(), cell, FailureKind::config);
                abort = true;
            }
        }
    };

    {
        std::vector<std::jthread> pool;
        const std::size_t n_workers = std::min(parallelism, cells.size());
        pool.reserve(n_workers);
        for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    }

    SweepResult result;
    result.grid = grid;
    for (auto& s : slots) {
        if (s) result.records.push_back(std::move(*s));
    }
    if (first_error) {
        auto& [what, cell, kind] = *first_error;
        throw SweepAborted("sweep aborted: " + what, cell, kind, std::move(result.records));
    }
    return result;
}

/// One line of the results CSV.
struct CsvRow {
    double l_over_lc = 0.0;
    double phi_over_pi = 0.0;
    double sir_db = 0.0;
    double snr_db = 0.0;
    std::uint64_t num_symbols = 0;
    std::uint64_t seed = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t total_bits = 0;
    double ber = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;

    friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

inline CsvRow to_csv_row(const SweepRecord& r) {
    const auto& b = r.ber;
    return {r.l_over_lc,   b.config.phi_rad / std::numbers::pi,
            b.config.sir_db, b.config.snr_db,
            b.config.num_symbols, b.seed,
            b.bit_errors,  b.total_bits,
            b.ber,         b.ci_low,
            b.ci_high};
}

/// Rows sorted by (l_over_lc, phi_over_pi, sir_db, num_symbols, snr_db).
inline std::vector<CsvRow> canonical_rows(std::span<const SweepRecord> records) {
    std::vector<CsvRow> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(to_csv_row(r));
    std::stable_sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
        return std::tie(a.l_over_lc, a.phi_over_pi, a.sir_db, a.num_symbols, a.snr_db) <
               std::tie(b.l_over_lc, b.phi_over_pi, b.sir_db, b.num_symbols, b.snr_db);
    });
    return rows;
}

namespace detail {

// Shortest representation that parses back to the same double.
inline std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline std::string format_number(std::uint64_t v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

template <class T>
T parse_field(std::string_view text, std::size_t line_no) {
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw IoError("CSV line " + std::to_string(line_no) + ": bad numeric field '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace detail

inline void write_csv(std::ostream& os, std::span<const CsvRow> rows) {
    using detail::format_number;
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        os << format_number(r.l_over_lc) << ',' << format_number(r.phi_over_pi) << ',' << format_number(r.sir_db)
           << ',' << format_number(r.snr_db) << ',' << format_number(r.num_symbols) << ',' << format_number(r.seed)
           << ',' << format_number(r.bit_errors) << ',' << format_number(r.total_bits) << ','
           << format_number(r.ber) << ',' << format_number(r.ci_low) << ',' << format_number(r.ci_high) << '\n';
    }
}

inline void write_csv(const SweepResult& result, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_csv(out, canonical_rows(result.records));
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::vector<CsvRow> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw IoError("CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw IoError("CSV header mismatch: '" + line + "'");

    std::vector<CsvRow> rows;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            f.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (f.size() != 11) throw IoError("CSV line " + std::to_string(line_no) + ": expected 11 fields");
        using detail::parse_field;
        rows.push_back({parse_field<double>(f[0], line_no), parse_field<double>(f[1], line_no),
                        parse_field<double>(f[2], line_no), parse_field<double>(f[3], line_no),
                        parse_field<std::uint64_t>(f[4], line_no), parse_field<std::uint64_t>(f[5], line_no),
                        parse_field<std::uint64_t>(f[6], line_no), parse_field<std::uint64_t>(f[7], line_no),
                        parse_field<double>(f[8], line_no), parse_field<double>(f[9], line_no),
                        parse_field<double>(f[10], line_no)});
    }
    return rows;
}

inline std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return read_csv(in);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

}  // namespace mpisim
