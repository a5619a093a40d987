#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace gibbsbd {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Image frame Omega = [-1/2, 1/2]^2, scaled to unit area.
inline constexpr double kOmegaHalfWidth = 0.5;
inline const double kOmegaDiameter = std::sqrt(2.0);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline bool in_omega(const Vec2& p) {
    return std::abs(p.x) <= kOmegaHalfWidth && std::abs(p.y) <= kOmegaHalfWidth;
}

// Polar reference: every star-shaped region is radial about this point,
// with angles measured from angle_origin.
struct Frame {
    Vec2 reference{0.0, 0.0};
    double angle_origin = 0.0;
};

struct PolarPoint {
    double theta = 0.0;  // in [0, 2*pi)
    double r = 0.0;
};

// Wraps an angle into [0, 2*pi).
double normalize_angle(double theta);

// point = reference + r * (cos(theta + angle_origin), sin(theta + angle_origin)).
// The reference point itself maps to (theta=0, r=0).
PolarPoint to_polar(const Vec2& point, const Frame& frame);

// A star-shaped boundary as a radial function of the frame angle.
class RadialCurve {
public:
    virtual ~RadialCurve() = default;
    virtual double radius(double theta) const = 0;
};

class ConstantCurve final : public RadialCurve {
public:
    explicit ConstantCurve(double r) : r_(r) {}
    double radius(double) const override { return r_; }
    double value() const { return r_; }

private:
    double r_;
};

// Periodic linear interpolation over radii sampled on a uniform grid of
// [0, 2*pi); used for posterior mean curves and other tabulated boundaries.
class SampledCurve final : public RadialCurve {
public:
    explicit SampledCurve(std::vector<double> radii);
    double radius(double theta) const override;
    const std::vector<double>& values() const { return radii_; }

private:
    std::vector<double> radii_;
};

struct EllipseShape {
    Vec2 center{0.0, 0.0};
    double rotation = 0.0;  // radians, orientation of the major axis
    double semi_axis_major = 0.0;
    double semi_axis_minor = 0.0;
};

// Equilateral triangle with its centroid at the frame reference point.
// orientation is the frame angle of one vertex.
struct TriangleShape {
    double height = 0.0;
    double orientation = kPi / 2.0;
};

// Distance from the frame reference point to the ellipse along frame angle
// theta. Requires the reference point strictly inside the ellipse.
double ellipse_radius(double theta, const EllipseShape& shape, const Frame& frame);

// Distance from the centroid to the triangle boundary along frame angle theta.
double triangle_radius(double theta, const TriangleShape& shape);

class EllipseBoundary final : public RadialCurve {
public:
    EllipseBoundary(const EllipseShape& shape, const Frame& frame);
    double radius(double theta) const override {
        return ellipse_radius(theta, shape_, frame_);
    }
    const EllipseShape& shape() const { return shape_; }

private:
    EllipseShape shape_;
    Frame frame_;
};

class TriangleBoundary final : public RadialCurve {
public:
    explicit TriangleBoundary(const TriangleShape& shape);
    double radius(double theta) const override {
        return triangle_radius(theta, shape_);
    }
    const TriangleShape& shape() const { return shape_; }

private:
    TriangleShape shape_;
};

// Membership test for the region enclosed by the curve. Points exactly on
// the boundary count as inside.
bool contains(const RadialCurve& curve, const Vec2& point, const Frame& frame);

// Number of trapezoid panels used by symm_diff_area.
inline constexpr int kSymmDiffPanels = 4096;

// Lebesgue measure of the symmetric difference between the two enclosed
// regions, via the polar identity
//   (1/2) * integral over [0,2*pi] of |a(t)^2 - b(t)^2| dt,
// evaluated with the trapezoid rule on a fixed uniform grid.
double symm_diff_area(const RadialCurve& a, const RadialCurve& b);

}  // namespace gibbsbd
