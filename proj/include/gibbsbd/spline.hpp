#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gibbsbd/geometry.hpp"

namespace gibbsbd {

// Cubic B-splines throughout.
inline constexpr int kSplineOrder = 4;

// Knot layout: D inner knots t_1 < ... < t_D with t_1 = 0 and t_D = 2*pi
// pinned, plus three outer knots on each side. The extended sequence
// t_{-2},...,t_{D+3} supports D+2 cubic basis functions on [0, 2*pi].
struct KnotVector {
    std::vector<double> inner;
    std::array<double, 3> outer_left{-2.0, -1.0, -0.5};
    std::array<double, 3> outer_right{kTwoPi + 0.5, kTwoPi + 1.0, kTwoPi + 2.0};

    int inner_count() const { return static_cast<int>(inner.size()); }
    std::vector<double> extended() const;

    // D evenly spaced inner knots over [0, 2*pi].
    static KnotVector uniform(int d);

    // Throws std::invalid_argument on any ordering or pinning violation.
    void validate() const;
};

// One normalized B-spline by the Cox-de Boor recursion over an extended knot
// sequence; basis `index` is supported on [knots[index], knots[index+order]].
// 0/0 terms are taken as 0 and the order-1 indicators are half-open.
double bspline_basis(std::span<const double> knots, int order, int index, double theta);

// Free-knot B-spline radial curve. Immutable once constructed; construction
// validates positivity of all coefficients and closure radius(0)==radius(2*pi)
// within kClosureTolerance.
class BoundaryCurve final : public RadialCurve {
public:
    static constexpr double kClosureTolerance = 1e-9;

    BoundaryCurve(const KnotVector& knots, std::vector<double> coefficients);

    double radius(double theta) const override;

    int inner_knot_count() const { return d_; }  // D
    int basis_count() const { return d_ + 2; }
    std::span<const double> extended_knots() const { return knots_ext_; }
    std::span<const double> inner_knots() const {
        return std::span<const double>(knots_ext_).subspan(3, d_);
    }
    std::span<const double> coefficients() const { return coef_; }
    KnotVector knot_vector() const;

    // Knot span index mu with T[mu] <= theta < T[mu+1], clamped to the domain
    // spans [3, D+1] so that theta == 2*pi lands in the last span.
    int find_span(double theta) const;

    // The kSplineOrder nonzero basis values at theta for basis indices
    // span-3 .. span (de Boor triangular scheme).
    std::array<double, 4> basis_at(int span, double theta) const;

private:
    std::vector<double> knots_ext_;
    std::vector<double> coef_;
    int d_;
};

// Solves the first coefficient so the curve closes, i.e.
//   beta_0 * (B_0(0) - B_0(2*pi)) = sum_{j>=1} beta_j * (B_j(2*pi) - B_j(0)).
// free_coefficients supplies beta_1..beta_{D+1}. Throws on a degenerate
// denominator or an infeasible (non-positive) solution.
BoundaryCurve solve_closure(const KnotVector& knots, std::span<const double> free_coefficients);

// Non-throwing variant for samplers: nullopt when the solved coefficient is
// not strictly positive (the proposal must be rejected). Degenerate closure
// still throws, as it indicates a broken knot layout rather than a rejection.
std::optional<BoundaryCurve> try_solve_closure(const KnotVector& knots,
                                               std::span<const double> free_coefficients);

// Flat JSON record {order, inner_knots, outer_knots, coefficients}.
std::string curve_to_json(const BoundaryCurve& curve);
BoundaryCurve curve_from_json(const std::string& text);

}  // namespace gibbsbd
