#ifndef WPCS_SVG_HPP
#define WPCS_SVG_HPP

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace wpcs {

/// One charted point with an optional confidence half-width whisker.
struct ChartPoint {
    double x = 0;
    double y = 0;
    double ci = 0;
};

/// Minimal line chart with axes, tick labels and confidence whiskers.
/// Dependency-free on purpose; output is a standalone SVG document.
inline std::string svg_line_chart(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<ChartPoint>& points) {
    const int width = 640, height = 420;
    const int ml = 80, mr = 24, mt = 48, mb = 56;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    if (!points.empty()) {
        x_min = x_max = points.front().x;
        y_min = y_max = points.front().y;
        for (const auto& p : points) {
            x_min = std::min(x_min, p.x);
            x_max = std::max(x_max, p.x);
            y_min = std::min(y_min, p.y - p.ci);
            y_max = std::max(y_max, p.y + p.ci);
        }
    }
    if (x_max == x_min) x_max = x_min + 1;
    if (y_max == y_min) y_max = y_min + 1;
    y_min = std::min(y_min, 0.0);

    const auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    const auto sy = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };
    const auto num = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.4g", v);
        return std::string(b);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
       << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
       << mt + ph << "\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 4.0;
        const double fy = y_min + (y_max - y_min) * i / 4.0;
        os << "<text x=\"" << sx(fx) << "\" y=\"" << mt + ph + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << num(fx) << "</text>\n"
           << "<text x=\"" << ml - 8 << "\" y=\"" << sy(fy) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << num(fy) << "</text>\n"
           << "<line x1=\"" << ml << "\" y1=\"" << sy(fy) << "\" x2=\"" << ml + pw
           << "\" y2=\"" << sy(fy) << "\" stroke=\"#dddddd\"/>\n";
    }
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << x_label << "</text>\n"
       << "<text x=\"18\" y=\"" << mt + ph / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
          "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << y_label << "</text>\n";

    // whiskers
    for (const auto& p : points) {
        if (p.ci <= 0) continue;
        const double x = sx(p.x);
        os << "<line x1=\"" << x << "\" y1=\"" << sy(p.y - p.ci) << "\" x2=\"" << x
           << "\" y2=\"" << sy(p.y + p.ci) << "\" stroke=\"#4477aa\"/>\n"
           << "<line x1=\"" << x - 4 << "\" y1=\"" << sy(p.y + p.ci) << "\" x2=\""
           << x + 4 << "\" y2=\"" << sy(p.y + p.ci) << "\" stroke=\"#4477aa\"/>\n"
           << "<line x1=\"" << x - 4 << "\" y1=\"" << sy(p.y - p.ci) << "\" x2=\""
           << x + 4 << "\" y2=\"" << sy(p.y - p.ci) << "\" stroke=\"#4477aa\"/>\n";
    }

    // polyline + markers
    os << "<polyline fill=\"none\" stroke=\"#4477aa\" stroke-width=\"2\" points=\"";
    for (const auto& p : points) os << sx(p.x) << ',' << sy(p.y) << ' ';
    os << "\"/>\n";
    for (const auto& p : points)
        os << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
           << "\" r=\"3\" fill=\"#4477aa\"/>\n";

    os << "</svg>\n";
    return os.str();
}

} // namespace wpcs

#endif
