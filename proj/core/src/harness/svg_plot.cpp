#include "mies/harness/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mies::harness {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 780.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 455.0;
constexpr std::size_t kMaxPoints = 2000;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", value);
    return buffer;
}

std::string tick_label(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4g", value);
    return buffer;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
    bool seen = false;

    void include(double v) {
        if (!std::isfinite(v)) return;
        if (!seen) {
            lo = hi = v;
            seen = true;
            return;
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void widen_if_degenerate() {
        if (!seen) {
            lo = 0.0;
            hi = 1.0;
        } else if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

} // namespace

void write_line_plot_svg(const std::filesystem::path& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<PlotSeries>& series) {
    Range xr;
    Range yr;
    for (const auto& s : series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (std::isfinite(s.y[i])) {
                xr.include(s.x[i]);
                yr.include(s.y[i]);
            }
        }
    }
    xr.widen_if_degenerate();
    yr.widen_if_degenerate();

    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kRight - kLeft); };
    auto py = [&](double y) { return kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop); };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("plot " + path.string() + ": cannot open for writing");

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << (kLeft + kRight) / 2.0
        << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">"
        << title << "</text>\n";

    for (int i = 0; i < 5; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
        const double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
        const double gx = px(fx);
        const double gy = py(fy);
        out << "<line x1=\"" << num(gx) << "\" y1=\"" << num(kTop) << "\" x2=\""
            << num(gx) << "\" y2=\"" << num(kBottom)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(gy) << "\" x2=\""
            << num(kRight) << "\" y2=\"" << num(gy)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << num(gx) << "\" y=\"" << num(kBottom + 18.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(fx) << "</text>\n";
        out << "<text x=\"" << num(kLeft - 6.0) << "\" y=\"" << num(gy + 4.0)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(fy) << "</text>\n";
    }
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
        << kRight - kLeft << "\" height=\"" << kBottom - kTop
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << (kLeft + kRight) / 2.0 << "\" y=\"" << kBottom + 38.0
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2.0
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 "
        << (kTop + kBottom) / 2.0 << ")\">" << y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (n == 0) continue;
        const std::size_t stride = n > kMaxPoints ? (n + kMaxPoints - 1) / kMaxPoints : 1;
        out << "<polyline fill=\"none\" stroke=\""
            << kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))]
            << "\" stroke-width=\"1.2\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < n; i += stride) {
            std::size_t idx = i;
            if (i + stride >= n) idx = n - 1;  // keep the final point
            if (!std::isfinite(s.y[idx])) continue;
            if (!first) out << ' ';
            out << num(px(s.x[idx])) << ',' << num(py(s.y[idx]));
            first = false;
            if (idx == n - 1) break;
        }
        out << "\"/>\n";
        if (!s.label.empty()) {
            out << "<text x=\"" << num(kRight - 8.0) << "\" y=\""
                << num(kTop + 16.0 + 14.0 * static_cast<double>(si))
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
                   "fill=\""
                << kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))] << "\">"
                << s.label << "</text>\n";
        }
    }
    out << "</svg>\n";
    out.flush();
    if (!out) throw std::runtime_error("plot " + path.string() + ": write failed");
}

} // namespace mies::harness
