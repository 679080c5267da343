#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fbsim/io.hpp"

namespace fbsim {

// Minimal static SVG emission: logical error rate curves per (strategy, L)
// and the two-strategy tolerance frontier. No interactivity.

namespace svg_detail {

inline const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Mapper {
    double x0, x1, y0, y1;  // data ranges
    double px0, px1, py0, py1;  // pixel ranges (y inverted)
    double x(double v) const { return px0 + (v - x0) / (x1 - x0) * (px1 - px0); }
    double y(double v) const { return py0 - (v - y0) / (y1 - y0) * (py0 - py1); }
};

inline std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof(b), "%.4g", v);
    return b;
}

}  // namespace svg_detail

// Failure-rate plot: x = swept parameter, y = log10 rate, one polyline per
// (strategy, L) series.
inline std::string threshold_plot_svg(const std::vector<ResultRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("no rows to plot");
    struct Series {
        std::vector<std::pair<double, double>> pts;  // (x, rate)
    };
    std::map<std::pair<std::string, int>, Series> series;
    double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
    for (const ResultRow& r : rows) {
        double x = r.l + r.p_m;
        double rate = std::max(r.rate, 0.5 / static_cast<double>(std::max<int64_t>(r.trials, 1)));
        double ly = std::log10(rate);
        series[{r.strategy, r.L}].pts.push_back({x, ly});
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, ly);
        ymax = std::max(ymax, ly);
    }
    if (xmax <= xmin) xmax = xmin + 1e-9;
    if (ymax <= ymin) ymax = ymin + 1e-9;
    svg_detail::Mapper m{xmin, xmax, ymin, std::min(0.0, ymax), 70, 760, 440, 30};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"520\" "
          "font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"800\" height=\"520\" fill=\"white\"/>\n";
    os << "<line x1=\"70\" y1=\"440\" x2=\"760\" y2=\"440\" stroke=\"black\"/>\n";
    os << "<line x1=\"70\" y1=\"30\" x2=\"70\" y2=\"440\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double xv = xmin + (xmax - xmin) * i / 5.0;
        os << "<text x=\"" << m.x(xv) << "\" y=\"458\" text-anchor=\"middle\">"
           << svg_detail::fmt(xv) << "</text>\n";
        os << "<line x1=\"" << m.x(xv) << "\" y1=\"440\" x2=\"" << m.x(xv)
           << "\" y2=\"444\" stroke=\"black\"/>\n";
    }
    for (int e = static_cast<int>(std::floor(ymin)); e <= 0; ++e) {
        os << "<text x=\"62\" y=\"" << m.y(e) + 4 << "\" text-anchor=\"end\">1e" << e
           << "</text>\n";
        os << "<line x1=\"66\" y1=\"" << m.y(e) << "\" x2=\"70\" y2=\"" << m.y(e)
           << "\" stroke=\"black\"/>\n";
    }
    os << "<text x=\"415\" y=\"492\" text-anchor=\"middle\">error parameter (l + p_m)</text>\n";
    os << "<text x=\"18\" y=\"235\" transform=\"rotate(-90 18 235)\" "
          "text-anchor=\"middle\">logical error rate</text>\n";

    int idx = 0;
    for (const auto& [key, s] : series) {
        const char* color =
            svg_detail::kPalette[static_cast<size_t>(idx) % (sizeof(svg_detail::kPalette) /
                                                             sizeof(char*))];
        auto pts = s.pts;
        std::sort(pts.begin(), pts.end());
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto& [x, y] : pts) os << m.x(x) << ',' << m.y(y) << ' ';
        os << "\"/>\n";
        for (auto& [x, y] : pts)
            os << "<circle cx=\"" << m.x(x) << "\" cy=\"" << m.y(y) << "\" r=\"2.5\" fill=\""
               << color << "\"/>\n";
        os << "<text x=\"640\" y=\"" << 46 + 16 * idx << "\" fill=\"" << color << "\">"
           << key.first << " L=" << key.second << "</text>\n";
        ++idx;
    }
    os << "</svg>\n";
    return os.str();
}

// Tolerance-frontier plot: the (loss, p_m) thresholds per strategy across
// rays, joined into a frontier per strategy.
inline std::string phase_plot_svg(
    const std::map<std::string, std::vector<std::pair<double, double>>>& frontier) {
    if (frontier.empty()) throw std::invalid_argument("no frontier points to plot");
    double xmax = 0, ymax = 0;
    for (const auto& [name, pts] : frontier)
        for (auto& [l, pm] : pts) {
            xmax = std::max(xmax, l);
            ymax = std::max(ymax, pm);
        }
    xmax = xmax > 0 ? xmax * 1.15 : 1e-3;
    ymax = ymax > 0 ? ymax * 1.15 : 1e-3;
    svg_detail::Mapper m{0, xmax, 0, ymax, 70, 760, 440, 30};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"520\" "
          "font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"800\" height=\"520\" fill=\"white\"/>\n";
    os << "<line x1=\"70\" y1=\"440\" x2=\"760\" y2=\"440\" stroke=\"black\"/>\n";
    os << "<line x1=\"70\" y1=\"30\" x2=\"70\" y2=\"440\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double xv = xmax * i / 5.0, yv = ymax * i / 5.0;
        os << "<text x=\"" << m.x(xv) << "\" y=\"458\" text-anchor=\"middle\">"
           << svg_detail::fmt(xv) << "</text>\n";
        os << "<text x=\"62\" y=\"" << m.y(yv) + 4 << "\" text-anchor=\"end\">"
           << svg_detail::fmt(yv) << "</text>\n";
    }
    os << "<text x=\"415\" y=\"492\" text-anchor=\"middle\">photon loss threshold</text>\n";
    os << "<text x=\"18\" y=\"235\" transform=\"rotate(-90 18 235)\" "
          "text-anchor=\"middle\">measurement error threshold</text>\n";
    int idx = 0;
    for (const auto& [name, pts] : frontier) {
        const char* color =
            svg_detail::kPalette[static_cast<size_t>(idx) % (sizeof(svg_detail::kPalette) /
                                                             sizeof(char*))];
        auto sorted = pts;
        std::sort(sorted.begin(), sorted.end());
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto& [l, pm] : sorted) os << m.x(l) << ',' << m.y(pm) << ' ';
        os << "\"/>\n";
        for (auto& [l, pm] : sorted)
            os << "<circle cx=\"" << m.x(l) << "\" cy=\"" << m.y(pm) << "\" r=\"3\" fill=\""
               << color << "\"/>\n";
        os << "<text x=\"640\" y=\"" << 46 + 16 * idx << "\" fill=\"" << color << "\">" << name
           << "</text>\n";
        ++idx;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace fbsim
