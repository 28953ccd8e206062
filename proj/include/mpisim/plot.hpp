#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mpisim/errors.hpp"
#include "mpisim/sweep.hpp"

namespace mpisim {

namespace detail {

inline constexpr std::array<const char*, 8> kSeriesColors{"#d62728", "#ff7f0e", "#2ca02c", "#1f77b4",
                                                          "#000000", "#9467bd", "#8c564b", "#e377c2"};

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

/// Log-scale BER against SIR for one L/L_c value, one series per phase
/// offset, 95% intervals as whiskers. Zero-error points are left out of the
/// series since they have no place on a log axis.
inline void write_ber_svg(std::ostream& os, std::span<const CsvRow> rows, const std::string& title) {
    using detail::svg_num;
    constexpr double width = 640, height = 480, left = 80, right = 150, top = 40, bottom = 60;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    // series key: (phi_over_pi, num_symbols)
    std::map<std::pair<double, std::uint64_t>, std::vector<CsvRow>> series;
    constexpr double inf = std::numeric_limits<double>::infinity();
    double xmin = inf, xmax = -inf, ymin = inf, ymax = -inf;
    for (const auto& r : rows) {
        series[{r.phi_over_pi, r.num_symbols}].push_back(r);
        xmin = std::min(xmin, r.sir_db);
        xmax = std::max(xmax, r.sir_db);
        if (r.ber > 0) {
            ymin = std::min(ymin, r.ci_low > 0 ? r.ci_low : r.ber);
            ymax = std::max(ymax, r.ci_high);
        }
    }
    if (!(xmax > xmin)) {
        xmin -= 1;
        xmax += 1;
    }
    double dmin = std::isfinite(ymin) ? std::floor(std::log10(ymin)) : -6;
    double dmax = std::isfinite(ymax) ? std::ceil(std::log10(ymax)) : 0;
    if (dmax <= dmin) dmax = dmin + 1;

    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (dmax - std::log10(y)) / (dmax - dmin) * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title
       << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double d = dmin; d <= dmax; d += 1) {
        const double y = py(std::pow(10.0, d));
        os << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << svg_num(y) << "\" y2=\"" << svg_num(y)
           << "\" stroke=\"#ccc\"/>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << svg_num(y + 4) << "\" text-anchor=\"end\">1e" << d
           << "</text>\n";
    }
    std::vector<double> xs;
    for (const auto& r : rows) xs.push_back(r.sir_db);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double x : xs) {
        os << "<text x=\"" << svg_num(px(x)) << "\" y=\"" << svg_num(top + ph + 18) << "\" text-anchor=\"middle\">"
           << detail::format_number(x) << "</text>\n";
    }
    os << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"" << height - 16
       << "\" text-anchor=\"middle\">SIR (dB)</text>\n";
    os << "<text x=\"20\" y=\"" << svg_num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << svg_num(top + ph / 2) << ")\">BER</text>\n";

    std::size_t k = 0;
    for (auto& [key, pts] : series) {
        std::sort(pts.begin(), pts.end(), [](const CsvRow& a, const CsvRow& b) { return a.sir_db < b.sir_db; });
        const char* color = detail::kSeriesColors[k % detail::kSeriesColors.size()];
        std::string poly;
        for (const auto& p : pts) {
            if (p.ber <= 0) continue;
            poly += svg_num(px(p.sir_db)) + "," + svg_num(py(p.ber)) + " ";
            const double lo = p.ci_low > 0 ? p.ci_low : std::pow(10.0, dmin);
            os << "<line x1=\"" << svg_num(px(p.sir_db)) << "\" x2=\"" << svg_num(px(p.sir_db)) << "\" y1=\""
               << svg_num(py(lo)) << "\" y2=\"" << svg_num(py(p.ci_high)) << "\" stroke=\"" << color << "\"/>\n";
            os << "<circle cx=\"" << svg_num(px(p.sir_db)) << "\" cy=\"" << svg_num(py(p.ber)) << "\" r=\"3\" fill=\""
               << color << "\"/>\n";
        }
        if (!poly.empty()) {
            os << "<polyline points=\"" << poly << "\" fill=\"none\" stroke=\"" << color << "\"/>\n";
        }
        const double ly = top + 16 + 18 * static_cast<double>(k);
        os << "<line x1=\"" << left + pw + 10 << "\" x2=\"" << left + pw + 30 << "\" y1=\"" << svg_num(ly)
           << "\" y2=\"" << svg_num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 36 << "\" y=\"" << svg_num(ly + 4) << "\">phi=" << detail::format_number(key.first)
           << "pi";
        if (series.size() > 1 && key.second != series.begin()->first.second) os << " N=" << key.second;
        os << "</text>\n";
        ++k;
    }
    os << "</svg>\n";
}

/// One SVG per L/L_c value, named ber_vs_sir_l<ratio>.svg. Returns the
/// written paths.
inline std::vector<std::filesystem::path> emit_plots(std::span<const CsvRow> rows,
                                                     const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    std::map<double, std::vector<CsvRow>> by_regime;
    for (const auto& r : rows) by_regime[r.l_over_lc].push_back(r);

    std::vector<std::filesystem::path> written;
    for (const auto& [ratio, group] : by_regime) {
        const auto path = out_dir / ("ber_vs_sir_l" + detail::format_number(ratio) + ".svg");
        std::ofstream out(path);
        if (!out) throw IoError("cannot open " + path.string() + " for writing");
        write_ber_svg(out, group, "BER vs SIR, L = " + detail::format_number(ratio) + " Lc");
        if (!out) throw IoError("write failed: " + path.string());
        written.push_back(path);
    }
    return written;
}

}  // namespace mpisim
