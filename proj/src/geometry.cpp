#include "gibbsbd/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace gibbsbd {

double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;  // guard against fmod rounding at the seam
    return t;
}

PolarPoint to_polar(const Vec2& point, const Frame& frame) {
    const double dx = point.x - frame.reference.x;
    const double dy = point.y - frame.reference.y;
    const double r = std::hypot(dx, dy);
    if (r == 0.0) return {0.0, 0.0};
    return {normalize_angle(std::atan2(dy, dx) - frame.angle_origin), r};
}

SampledCurve::SampledCurve(std::vector<double> radii) : radii_(std::move(radii)) {
    if (radii_.size() < 2) {
        throw std::invalid_argument("SampledCurve needs at least 2 grid values");
    }
    for (double v : radii_) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw std::invalid_argument("SampledCurve radii must be finite and positive");
        }
    }
}

double SampledCurve::radius(double theta) const {
    const std::size_t n = radii_.size();
    const double u = normalize_angle(theta) / kTwoPi * static_cast<double>(n);
    std::size_t i = static_cast<std::size_t>(u);
    if (i >= n) i = n - 1;
    const double frac = u - static_cast<double>(i);
    const std::size_t j = (i + 1 == n) ? 0 : i + 1;
    return (1.0 - frac) * radii_[i] + frac * radii_[j];
}

double ellipse_radius(double theta, const EllipseShape& shape, const Frame& frame) {
    // Ray p(r) = reference + r*u, intersected with the implicit ellipse
    // (d.e1/a)^2 + (d.e2/b)^2 = 1 where d = p - center.
    const double world = theta + frame.angle_origin;
    const double ux = std::cos(world);
    const double uy = std::sin(world);

    const double c1 = std::cos(shape.rotation);
    const double s1 = std::sin(shape.rotation);
    const double dx = frame.reference.x - shape.center.x;
    const double dy = frame.reference.y - shape.center.y;

    const double a = shape.semi_axis_major;
    const double b = shape.semi_axis_minor;
    const double xi0 = (dx * c1 + dy * s1) / a;
    const double eta0 = (-dx * s1 + dy * c1) / b;
    const double xi1 = (ux * c1 + uy * s1) / a;
    const double eta1 = (-ux * s1 + uy * c1) / b;

    const double qa = xi1 * xi1 + eta1 * eta1;
    const double qb = 2.0 * (xi0 * xi1 + eta0 * eta1);
    const double qc = xi0 * xi0 + eta0 * eta0 - 1.0;

    if (qc >= 0.0) {
        throw std::domain_error("ellipse_radius: frame reference point is not inside the ellipse");
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    // qc < 0 forces one positive and one negative root.
    return (-qb + std::sqrt(disc)) / (2.0 * qa);
}

double triangle_radius(double theta, const TriangleShape& shape) {
    if (shape.height <= 0.0) {
        throw std::invalid_argument("triangle_radius: height must be positive");
    }
    // The three edges are lines at distance height/3 from the centroid, with
    // outward normals opposite the vertices. The ray at angle theta hits the
    // edge whose normal is nearest in angle (within pi/3).
    const double apothem = shape.height / 3.0;
    double best = kPi;
    for (int k = 0; k < 3; ++k) {
        const double normal = shape.orientation + kPi + 2.0 * kPi * k / 3.0;
        double d = normalize_angle(theta - normal);
        if (d > kPi) d -= kTwoPi;
        if (std::abs(d) < std::abs(best)) best = d;
    }
    return apothem / std::cos(best);
}

EllipseBoundary::EllipseBoundary(const EllipseShape& shape, const Frame& frame)
    : shape_(shape), frame_(frame) {
    const double c1 = std::cos(shape.rotation);
    const double s1 = std::sin(shape.rotation);
    const double dx = frame.reference.x - shape.center.x;
    const double dy = frame.reference.y - shape.center.y;
    const double xi = (dx * c1 + dy * s1) / shape.semi_axis_major;
    const double eta = (-dx * s1 + dy * c1) / shape.semi_axis_minor;
    if (shape.semi_axis_major <= 0.0 || shape.semi_axis_minor <= 0.0 ||
        xi * xi + eta * eta >= 1.0) {
        throw std::invalid_argument(
            "EllipseBoundary: frame reference point must lie strictly inside the ellipse");
    }
}

TriangleBoundary::TriangleBoundary(const TriangleShape& shape) : shape_(shape) {
    if (shape.height <= 0.0) {
        throw std::invalid_argument("TriangleBoundary: height must be positive");
    }
}

bool contains(const RadialCurve& curve, const Vec2& point, const Frame& frame) {
    const PolarPoint p = to_polar(point, frame);
    return p.r <= curve.radius(p.theta);
}

double symm_diff_area(const RadialCurve& a, const RadialCurve& b) {
    const int n = kSymmDiffPanels;
    const double dt = kTwoPi / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double theta = (i == n) ? kTwoPi : i * dt;
        const double ra = a.radius(theta);
        const double rb = b.radius(theta);
        if (!std::isfinite(ra) || !std::isfinite(rb)) {
            throw std::domain_error("symm_diff_area: curve produced a non-finite value");
        }
        const double f = 0.5 * std::abs(ra * ra - rb * rb);
        sum += (i == 0 || i == n) ? 0.5 * f : f;
    }
    return sum * dt;
}

}  // namespace gibbsbd
