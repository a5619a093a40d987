#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gibbsbd/geometry.hpp"
#include "gibbsbd/oracle.hpp"
#include "gibbsbd/rng.hpp"
#include "test_util.hpp"

using namespace gibbsbd;

namespace {

const EllipseShape kC1Ellipse{{0.1, 0.1}, kPi / 3.0, 0.35, 0.25};

// Independent check for the ray-ellipse radius: bisection on the implicit
// equation along the ray.
double ellipse_radius_bisect(double theta, const EllipseShape& shape, const Frame& frame) {
    const auto implicit = [&](double r) {
        const double x = frame.reference.x + r * std::cos(theta + frame.angle_origin);
        const double y = frame.reference.y + r * std::sin(theta + frame.angle_origin);
        const double c = std::cos(shape.rotation), s = std::sin(shape.rotation);
        const double dx = x - shape.center.x, dy = y - shape.center.y;
        const double xi = (dx * c + dy * s) / shape.semi_axis_major;
        const double eta = (-dx * s + dy * c) / shape.semi_axis_minor;
        return xi * xi + eta * eta - 1.0;
    };
    double lo = 0.0, hi = 2.0;
    REQUIRE(implicit(lo) < 0.0);
    REQUIRE(implicit(hi) > 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (implicit(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("to_polar axis-aligned points") {
    const Frame origin;
    auto p = to_polar({0.1, 0.0}, origin);
    CHECK(p.theta == doctest::Approx(0.0));
    CHECK(p.r == doctest::Approx(0.1));

    p = to_polar({0.0, -0.2}, origin);
    CHECK(p.theta == doctest::Approx(3.0 * kPi / 2.0));
    CHECK(p.r == doctest::Approx(0.2));
}

TEST_CASE("to_polar at the reference point") {
    const Frame frame{{0.1, 0.1}, 0.0};
    const auto p = to_polar({0.1, 0.1}, frame);
    CHECK(p.theta == 0.0);
    CHECK(p.r == 0.0);
}

TEST_CASE("to_polar round trip with angle origin") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Frame frame{{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)},
                          rng.uniform(0.0, kTwoPi)};
        const Vec2 pt{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        const auto p = to_polar(pt, frame);
        CHECK(p.theta >= 0.0);
        CHECK(p.theta < kTwoPi);
        const double x = frame.reference.x + p.r * std::cos(p.theta + frame.angle_origin);
        const double y = frame.reference.y + p.r * std::sin(p.theta + frame.angle_origin);
        CHECK(x == doctest::Approx(pt.x).epsilon(1e-12));
        CHECK(y == doctest::Approx(pt.y).epsilon(1e-12));
    }
}

TEST_CASE("contains against a constant curve") {
    const Frame origin;
    const ConstantCurve circle(0.3);
    CHECK(contains(circle, {0.1, 0.0}, origin));
    CHECK_FALSE(contains(circle, {0.4, 0.0}, origin));
    // Boundary point counts as inside.
    CHECK(contains(circle, {0.3, 0.0}, origin));
}

TEST_CASE("contains agrees with to_polar") {
    Rng rng(12);
    const Frame origin;
    const auto curve = testutil::random_sampled_curve(rng);
    for (int i = 0; i < 500; ++i) {
        const Vec2 pt{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        const auto p = to_polar(pt, origin);
        CHECK(contains(curve, pt, origin) == (p.r <= curve.radius(p.theta)));
    }
}

TEST_CASE("ellipse_radius circle special case") {
    const Frame origin;
    const EllipseShape circle{{0.0, 0.0}, 0.0, 0.3, 0.3};
    for (double theta : {0.0, 0.7, kPi, 5.1}) {
        CHECK(ellipse_radius(theta, circle, origin) == doctest::Approx(0.3).epsilon(1e-12));
    }
}

TEST_CASE("ellipse_radius matches bisection oracle") {
    const Frame origin;
    CHECK(ellipse_radius(0.0, kC1Ellipse, origin) ==
          doctest::Approx(ellipse_radius_bisect(0.0, kC1Ellipse, origin)).epsilon(1e-10));
    Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        const double theta = rng.uniform(0.0, kTwoPi);
        CHECK(ellipse_radius(theta, kC1Ellipse, origin) ==
              doctest::Approx(ellipse_radius_bisect(theta, kC1Ellipse, origin)).epsilon(1e-10));
    }
}

TEST_CASE("ellipse boundary is positive and closed") {
    const Frame origin;
    const EllipseBoundary curve(kC1Ellipse, origin);
    double min_r = 1e9;
    for (int i = 0; i <= 1000; ++i) {
        min_r = std::min(min_r, curve.radius(kTwoPi * i / 1000.0));
    }
    CHECK(min_r > 0.0);
    CHECK(curve.radius(0.0) == doctest::Approx(curve.radius(kTwoPi)).epsilon(1e-12));
}

TEST_CASE("ellipse_radius rejects an outside reference point") {
    const Frame far{{0.45, 0.45}, 0.0};
    CHECK_THROWS(ellipse_radius(0.0, kC1Ellipse, far));
    CHECK_THROWS(EllipseBoundary(kC1Ellipse, far));
}

TEST_CASE("triangle_radius vertex and edge distances") {
    const TriangleShape tri{0.5, kPi / 2.0};
    // Vertex at theta = pi/2: centroid-to-vertex is 2h/3.
    CHECK(triangle_radius(kPi / 2.0, tri) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // Edge midpoint opposite the vertex: centroid-to-edge is h/3.
    CHECK(triangle_radius(kPi / 2.0 + kPi, tri) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("triangle_radius has three-fold symmetry") {
    const TriangleShape tri{0.5, kPi / 2.0};
    Rng rng(14);
    for (int i = 0; i < 200; ++i) {
        const double theta = rng.uniform(0.0, kTwoPi);
        CHECK(triangle_radius(theta, tri) ==
              doctest::Approx(triangle_radius(theta + kTwoPi / 3.0, tri)).epsilon(1e-10));
    }
}

TEST_CASE("symm_diff_area of identical curves is exactly zero") {
    Rng rng(15);
    const auto curve = testutil::random_sampled_curve(rng);
    CHECK(symm_diff_area(curve, curve) == 0.0);
}

TEST_CASE("symm_diff_area annulus") {
    const ConstantCurve a(0.2), b(0.3);
    const double expect = kPi * (0.3 * 0.3 - 0.2 * 0.2);
    CHECK(symm_diff_area(a, b) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(std::abs(symm_diff_area(a, b) - 0.1570796) < 1e-6);
}

TEST_CASE("symm_diff_area is symmetric and satisfies the triangle inequality") {
    Rng rng(16);
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = testutil::random_sampled_curve(rng);
        const auto b = testutil::random_sampled_curve(rng);
        const auto c = testutil::random_sampled_curve(rng);
        CHECK(symm_diff_area(a, b) == symm_diff_area(b, a));
        CHECK(symm_diff_area(a, c) <= symm_diff_area(a, b) + symm_diff_area(b, c) + 1e-12);
    }
}

TEST_CASE("symm_diff_area constant-curve identity") {
    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const double r1 = rng.uniform(0.05, 0.45);
        const double r2 = rng.uniform(0.05, 0.45);
        const ConstantCurve a(std::min(r1, r2)), b(std::max(r1, r2));
        CHECK(symm_diff_area(a, b) ==
              doctest::Approx(kPi * (b.value() * b.value() - a.value() * a.value()))
                  .epsilon(1e-6));
    }
}

TEST_CASE("symm_diff_area bounded by the polar L1 identity") {
    // min(b) * L1 / 2 <= area <= diam(Omega) * L1 / 2 on the quadrature grid.
    Rng rng(18);
    for (int rep = 0; rep < 10; ++rep) {
        const auto a = testutil::random_sampled_curve(rng, 64, 0.08, 0.42);
        const auto b = testutil::random_sampled_curve(rng, 64, 0.08, 0.42);
        double l1 = 0.0;
        double min_b = 1e9;
        const int n = kSymmDiffPanels;
        for (int i = 0; i <= n; ++i) {
            const double theta = (i == n) ? kTwoPi : kTwoPi * i / n;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            l1 += w * std::abs(a.radius(theta) - b.radius(theta));
            min_b = std::min(min_b, b.radius(theta));
        }
        l1 *= kTwoPi / n;
        const double area = symm_diff_area(a, b);
        CHECK(area >= 0.5 * min_b * l1 - 1e-9);
        CHECK(area <= 0.5 * kOmegaDiameter * l1 + 1e-9);
    }
}

TEST_CASE("symm_diff_area rejects non-finite curves") {
    struct BadCurve final : RadialCurve {
        double radius(double) const override { return std::numeric_limits<double>::quiet_NaN(); }
    };
    CHECK_THROWS(symm_diff_area(BadCurve{}, ConstantCurve{0.2}));
}

TEST_CASE("symm_diff_area agrees with grid counting for the C1 ellipse") {
    const Frame origin;
    const EllipseBoundary ellipse(kC1Ellipse, origin);
    const ConstantCurve circle(0.15);
    const double quad = symm_diff_area(ellipse, circle);
    const double grid = oracle::grid_count_area(ellipse, circle, origin, 2000);
    CHECK(std::abs(quad - grid) < 1e-3);
}

TEST_CASE("sampled curve interpolates periodically") {
    const SampledCurve curve(std::vector<double>{0.2, 0.3, 0.2, 0.3});
    CHECK(curve.radius(0.0) == doctest::Approx(0.2));
    CHECK(curve.radius(kTwoPi) == doctest::Approx(0.2));
    CHECK(curve.radius(kPi / 4.0) == doctest::Approx(0.25));  // halfway to the next grid point
    CHECK(curve.radius(-kPi / 4.0) == doctest::Approx(0.25));
}
