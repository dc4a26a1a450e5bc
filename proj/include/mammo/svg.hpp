#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mammo {

// Minimal line chart with error bars, written as a standalone SVG.
struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
    std::vector<double> err; // half-widths; empty = no bars
    std::string color; // empty = palette
};

struct SvgChart {
    std::string title;
    std::string x_label, y_label;
    std::vector<SvgSeries> series;
    std::vector<std::string> x_tick_labels; // optional, for categorical axes
    double y_min = 0.0, y_max = 1.0;
    int width = 640, height = 420;
};

void write_svg_chart(const SvgChart& chart, const std::filesystem::path& path);

} // namespace mammo
