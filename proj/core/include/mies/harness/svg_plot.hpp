#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mies::harness {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;  // non-finite points are dropped from the polyline
};

// Standalone 800x500 SVG line plot: one polyline per series, shared axes
// with five ticks per side, fixed color cycle. Series beyond 2000 points
// are stride-thinned (last point kept). The output carries no timestamps,
// so identical input yields identical bytes.
// Unwritable path -> std::runtime_error.
void write_line_plot_svg(const std::filesystem::path& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<PlotSeries>& series);

} // namespace mies::harness
