#include "gibbsbd/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace gibbsbd {

namespace {

constexpr double kCanvas = 640.0;
constexpr double kMargin = 20.0;

double map_x(double x) { return kMargin + (x + kOmegaHalfWidth) * (kCanvas - 2 * kMargin); }
double map_y(double y) { return kCanvas - kMargin - (y + kOmegaHalfWidth) * (kCanvas - 2 * kMargin); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

Vec2 curve_point(double theta, double r, const Frame& frame) {
    return {frame.reference.x + r * std::cos(theta + frame.angle_origin),
            frame.reference.y + r * std::sin(theta + frame.angle_origin)};
}

std::string polyline_points(const std::vector<double>& theta, const std::vector<double>& radii,
                            const Frame& frame) {
    std::string out;
    for (std::size_t i = 0; i <= theta.size(); ++i) {
        const std::size_t j = i % theta.size();  // close the loop
        const Vec2 p = curve_point(theta[j], radii[j], frame);
        if (i) out += ' ';
        out += fmt(map_x(p.x)) + "," + fmt(map_y(p.y));
    }
    return out;
}

}  // namespace

void emit_plot(const CurveGrid& grid, const CredibleBand& band, const RadialCurve* truth,
               const Dataset& data, const Frame& frame, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_plot: cannot open " + path);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\">\n";
    out << "<rect width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n";

    // Pixel scatter, intensity-shaded between robust quantiles. Large grids
    // are strided down to keep the file manageable.
    out << "<g id=\"pixels\">\n";
    {
        std::vector<double> ys;
        ys.reserve(data.records.size());
        for (const PixelRecord& rec : data.records) ys.push_back(rec.y);
        std::sort(ys.begin(), ys.end());
        const double lo = ys.empty() ? 0.0 : ys[static_cast<std::size_t>(0.01 * (ys.size() - 1))];
        const double hi = ys.empty() ? 1.0 : ys[static_cast<std::size_t>(0.99 * (ys.size() - 1))];
        const double width = std::max(hi - lo, 1e-12);
        const std::size_t stride =
            std::max<std::size_t>(1, data.records.size() / 20000);
        for (std::size_t i = 0; i < data.records.size(); i += stride) {
            const PixelRecord& rec = data.records[i];
            const double t = std::clamp((rec.y - lo) / width, 0.0, 1.0);
            const int shade = static_cast<int>(30 + 200 * t);
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.6\" fill=\"rgb(%d,%d,%d)\"/>\n",
                          map_x(rec.x.x), map_y(rec.x.y), shade, shade, shade);
            out << buf;
        }
    }
    out << "</g>\n";

    // Credible band as an annulus between the lower and upper curves.
    out << "<g id=\"band\">\n";
    if (!grid.theta.empty()) {
        std::string d = "M";
        for (std::size_t i = 0; i <= grid.theta.size(); ++i) {
            const std::size_t j = i % grid.theta.size();
            const Vec2 p = curve_point(grid.theta[j], band.upper[j], frame);
            d += (i ? " L" : " ") + fmt(map_x(p.x)) + " " + fmt(map_y(p.y));
        }
        d += " Z M";
        for (std::size_t i = 0; i <= grid.theta.size(); ++i) {
            const std::size_t j = (grid.theta.size() - i) % grid.theta.size();
            const Vec2 p = curve_point(grid.theta[j], band.lower[j], frame);
            d += (i ? " L" : " ") + fmt(map_x(p.x)) + " " + fmt(map_y(p.y));
        }
        d += " Z";
        out << "<path d=\"" << d
            << "\" fill=\"#bbbbbb\" fill-opacity=\"0.65\" fill-rule=\"evenodd\"/>\n";
    }
    out << "</g>\n";

    // True boundary (solid); the group stays, possibly empty, for external
    // datasets without a known truth.
    out << "<g id=\"truth\">\n";
    if (truth != nullptr && !grid.theta.empty()) {
        std::vector<double> radii(grid.theta.size());
        for (std::size_t i = 0; i < grid.theta.size(); ++i) {
            radii[i] = truth->radius(grid.theta[i]);
        }
        out << "<polyline points=\"" << polyline_points(grid.theta, radii, frame)
            << "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    }
    out << "</g>\n";

    // Posterior mean (dashed).
    out << "<g id=\"mean\">\n";
    if (!grid.theta.empty()) {
        out << "<polyline points=\"" << polyline_points(grid.theta, grid.mean, frame)
            << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" "
               "stroke-dasharray=\"8 5\"/>\n";
    }
    out << "</g>\n";
    out << "</svg>\n";
}

}  // namespace gibbsbd
