#include "mammo/svg.hpp"

#include "mammo/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace mammo {

namespace {
    const char* kPalette[] = { "#1f6fb4", "#d95f02", "#2ca02c", "#9467bd", "#8c564b", "#555555" };
}

void write_svg_chart(const SvgChart& chart, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());

    const double ml = 64, mr = 140, mt = 36, mb = 48;
    const double pw = chart.width - ml - mr;
    const double ph = chart.height - mt - mb;

    double x_min = 1e300, x_max = -1e300;
    for (const auto& s : chart.series)
        for (double x : s.x) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
        }
    if (x_min > x_max) {
        x_min = 0;
        x_max = 1;
    }
    if (x_max == x_min)
        x_max = x_min + 1;
    const double y_min = chart.y_min, y_max = chart.y_max;

    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double y) { return mt + (1.0 - (y - y_min) / (y_max - y_min)) * ph; };

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << chart.width << "' height='" << chart.height << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << chart.width / 2 << "' y='20' text-anchor='middle' font-size='15' font-family='sans-serif'>"
        << chart.title << "</text>\n";

    // frame and y grid
    out << "<rect x='" << ml << "' y='" << mt << "' width='" << pw << "' height='" << ph
        << "' fill='none' stroke='#333'/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double yv = y_min + (y_max - y_min) * i / 5.0;
        out << "<line x1='" << ml << "' y1='" << py(yv) << "' x2='" << ml + pw << "' y2='" << py(yv)
            << "' stroke='#ddd'/>\n";
        out << "<text x='" << ml - 6 << "' y='" << py(yv) + 4 << "' text-anchor='end' font-size='11' font-family='sans-serif'>";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", yv);
        out << buf << "</text>\n";
    }

    // x ticks: either categorical labels aligned with the first series, or numeric
    if (!chart.x_tick_labels.empty() && !chart.series.empty()) {
        const auto& xs = chart.series.front().x;
        for (std::size_t i = 0; i < xs.size() && i < chart.x_tick_labels.size(); ++i)
            out << "<text x='" << px(xs[i]) << "' y='" << mt + ph + 18
                << "' text-anchor='middle' font-size='11' font-family='sans-serif'>" << chart.x_tick_labels[i] << "</text>\n";
    } else {
        for (int i = 0; i <= 4; ++i) {
            const double xv = x_min + (x_max - x_min) * i / 4.0;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", xv);
            out << "<text x='" << px(xv) << "' y='" << mt + ph + 18
                << "' text-anchor='middle' font-size='11' font-family='sans-serif'>" << buf << "</text>\n";
        }
    }
    out << "<text x='" << ml + pw / 2 << "' y='" << chart.height - 10
        << "' text-anchor='middle' font-size='12' font-family='sans-serif'>" << chart.x_label << "</text>\n";
    out << "<text x='16' y='" << mt + ph / 2 << "' text-anchor='middle' font-size='12' font-family='sans-serif'"
        << " transform='rotate(-90 16 " << mt + ph / 2 << ")'>" << chart.y_label << "</text>\n";

    int ci = 0;
    for (const auto& s : chart.series) {
        const std::string color = s.color.empty() ? kPalette[ci % 6] : s.color;
        ++ci;
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.8' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << px(s.x[i]) << "," << py(std::clamp(s.y[i], y_min, y_max)) << " ";
        out << "'/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            out << "<circle cx='" << px(s.x[i]) << "' cy='" << py(std::clamp(s.y[i], y_min, y_max))
                << "' r='3' fill='" << color << "'/>\n";
            if (i < s.err.size() && s.err[i] > 0) {
                const double lo = py(std::clamp(s.y[i] - s.err[i], y_min, y_max));
                const double hi = py(std::clamp(s.y[i] + s.err[i], y_min, y_max));
                const double cx = px(s.x[i]);
                out << "<line x1='" << cx << "' y1='" << lo << "' x2='" << cx << "' y2='" << hi
                    << "' stroke='" << color << "'/>\n";
                out << "<line x1='" << cx - 4 << "' y1='" << lo << "' x2='" << cx + 4 << "' y2='" << lo
                    << "' stroke='" << color << "'/>\n";
                out << "<line x1='" << cx - 4 << "' y1='" << hi << "' x2='" << cx + 4 << "' y2='" << hi
                    << "' stroke='" << color << "'/>\n";
            }
        }
    }

    // legend
    ci = 0;
    for (const auto& s : chart.series) {
        const std::string color = s.color.empty() ? kPalette[ci % 6] : s.color;
        const double ly = mt + 14 + 18 * ci;
        ++ci;
        out << "<line x1='" << ml + pw + 10 << "' y1='" << ly << "' x2='" << ml + pw + 30 << "' y2='" << ly
            << "' stroke='" << color << "' stroke-width='2'/>\n";
        out << "<text x='" << ml + pw + 34 << "' y='" << ly + 4 << "' font-size='11' font-family='sans-serif'>"
            << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace mammo
