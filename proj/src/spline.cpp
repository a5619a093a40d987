#include "gibbsbd/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gibbsbd {

std::vector<double> KnotVector::extended() const {
    std::vector<double> t;
    t.reserve(inner.size() + 6);
    t.insert(t.end(), outer_left.begin(), outer_left.end());
    t.insert(t.end(), inner.begin(), inner.end());
    t.insert(t.end(), outer_right.begin(), outer_right.end());
    return t;
}

KnotVector KnotVector::uniform(int d) {
    if (d < 2) throw std::invalid_argument("KnotVector::uniform: need at least 2 inner knots");
    KnotVector kv;
    kv.inner.resize(d);
    for (int i = 0; i < d; ++i) {
        kv.inner[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(d - 1);
    }
    kv.inner.front() = 0.0;
    kv.inner.back() = kTwoPi;
    return kv;
}

void KnotVector::validate() const {
    if (inner.size() < 2) {
        throw std::invalid_argument("KnotVector: need at least 2 inner knots");
    }
    if (inner.front() != 0.0 || inner.back() != kTwoPi) {
        throw std::invalid_argument("KnotVector: endpoints must be pinned at 0 and 2*pi");
    }
    const std::vector<double> t = extended();
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i - 1] < t[i])) {
            throw std::invalid_argument("KnotVector: extended knots must be strictly increasing");
        }
    }
}

double bspline_basis(std::span<const double> knots, int order, int index, double theta) {
    if (order < 1) throw std::invalid_argument("bspline_basis: order must be >= 1");
    const int max_index = static_cast<int>(knots.size()) - order - 1;
    if (index < 0 || index > max_index) {
        throw std::out_of_range("bspline_basis: basis index out of range for knot sequence");
    }
    if (order == 1) {
        return (knots[index] <= theta && theta < knots[index + 1]) ? 1.0 : 0.0;
    }
    double value = 0.0;
    const double left_den = knots[index + order - 1] - knots[index];
    if (left_den > 0.0) {
        value += (theta - knots[index]) / left_den * bspline_basis(knots, order - 1, index, theta);
    }
    const double right_den = knots[index + order] - knots[index + 1];
    if (right_den > 0.0) {
        value += (knots[index + order] - theta) / right_den *
                 bspline_basis(knots, order - 1, index + 1, theta);
    }
    return value;
}

BoundaryCurve::BoundaryCurve(const KnotVector& knots, std::vector<double> coefficients)
    : knots_ext_(knots.extended()), coef_(std::move(coefficients)), d_(knots.inner_count()) {
    knots.validate();
    if (static_cast<int>(coef_.size()) != d_ + 2) {
        throw std::invalid_argument("BoundaryCurve: expected D+2 coefficients");
    }
    for (double b : coef_) {
        if (!std::isfinite(b) || b <= 0.0) {
            throw std::invalid_argument("BoundaryCurve: coefficients must be finite and positive");
        }
    }
    const double gap = std::abs(radius(0.0) - radius(kTwoPi));
    if (gap > kClosureTolerance) {
        throw std::invalid_argument("BoundaryCurve: curve is not closed");
    }
}

int BoundaryCurve::find_span(double theta) const {
    // Domain spans run from [T[3], T[4]) up to [T[D+1], T[D+2]].
    const auto it = std::upper_bound(knots_ext_.begin() + 3, knots_ext_.begin() + d_ + 3, theta);
    int span = static_cast<int>(it - knots_ext_.begin()) - 1;
    return std::clamp(span, 3, d_ + 1);
}

std::array<double, 4> BoundaryCurve::basis_at(int span, double theta) const {
    // Triangular scheme; out[j] is the value of basis (span-3+j).
    std::array<double, 4> out{1.0, 0.0, 0.0, 0.0};
    std::array<double, 3> left{};
    std::array<double, 3> right{};
    for (int level = 1; level < kSplineOrder; ++level) {
        left[level - 1] = theta - knots_ext_[span + 1 - level];
        right[level - 1] = knots_ext_[span + level] - theta;
        double carry = 0.0;
        for (int j = 0; j < level; ++j) {
            const double den = right[j] + left[level - 1 - j];
            const double tmp = out[j] / den;
            out[j] = carry + right[j] * tmp;
            carry = left[level - 1 - j] * tmp;
        }
        out[level] = carry;
    }
    return out;
}

double BoundaryCurve::radius(double theta) const {
    const int span = find_span(theta);
    const std::array<double, 4> b = basis_at(span, theta);
    double r = 0.0;
    for (int j = 0; j < 4; ++j) {
        r += coef_[span - 3 + j] * b[j];
    }
    if (!(r > 0.0)) {
        throw std::domain_error("BoundaryCurve::radius: non-positive evaluation");
    }
    return r;
}

KnotVector BoundaryCurve::knot_vector() const {
    KnotVector kv;
    kv.inner.assign(knots_ext_.begin() + 3, knots_ext_.begin() + 3 + d_);
    kv.outer_left = {knots_ext_[0], knots_ext_[1], knots_ext_[2]};
    kv.outer_right = {knots_ext_[d_ + 3], knots_ext_[d_ + 4], knots_ext_[d_ + 5]};
    return kv;
}

namespace {

struct ClosureSolve {
    bool feasible;
    std::vector<double> coefficients;
};

ClosureSolve solve_closure_impl(const KnotVector& knots, std::span<const double> free_coefficients) {
    knots.validate();
    const int d = knots.inner_count();
    const int n_basis = d + 2;
    if (static_cast<int>(free_coefficients.size()) != n_basis - 1) {
        throw std::invalid_argument("solve_closure: expected D+1 free coefficients");
    }
    const std::vector<double> t = knots.extended();
    const std::span<const double> ts(t);

    double denom = bspline_basis(ts, kSplineOrder, 0, 0.0) -
                   bspline_basis(ts, kSplineOrder, 0, kTwoPi);
    if (std::abs(denom) < 1e-12) {
        throw std::runtime_error("solve_closure: degenerate closure (basis 0 cancels at both ends)");
    }
    double rhs = 0.0;
    for (int j = 1; j < n_basis; ++j) {
        const double bj0 = bspline_basis(ts, kSplineOrder, j, 0.0);
        const double bj1 = bspline_basis(ts, kSplineOrder, j, kTwoPi);
        rhs += free_coefficients[j - 1] * (bj1 - bj0);
    }
    const double beta0 = rhs / denom;

    ClosureSolve out;
    out.feasible = beta0 > 0.0;
    if (out.feasible) {
        out.coefficients.reserve(n_basis);
        out.coefficients.push_back(beta0);
        out.coefficients.insert(out.coefficients.end(), free_coefficients.begin(),
                                free_coefficients.end());
    }
    return out;
}

}  // namespace

BoundaryCurve solve_closure(const KnotVector& knots, std::span<const double> free_coefficients) {
    ClosureSolve s = solve_closure_impl(knots, free_coefficients);
    if (!s.feasible) {
        throw std::runtime_error("solve_closure: infeasible closure (solved coefficient <= 0)");
    }
    return BoundaryCurve(knots, std::move(s.coefficients));
}

std::optional<BoundaryCurve> try_solve_closure(const KnotVector& knots,
                                               std::span<const double> free_coefficients) {
    ClosureSolve s = solve_closure_impl(knots, free_coefficients);
    if (!s.feasible) return std::nullopt;
    return BoundaryCurve(knots, std::move(s.coefficients));
}

std::string curve_to_json(const BoundaryCurve& curve) {
    const KnotVector kv = curve.knot_vector();
    nlohmann::json j;
    j["order"] = kSplineOrder;
    j["inner_knots"] = kv.inner;
    j["outer_knots"] = {kv.outer_left[0], kv.outer_left[1], kv.outer_left[2],
                        kv.outer_right[0], kv.outer_right[1], kv.outer_right[2]};
    j["coefficients"] = std::vector<double>(curve.coefficients().begin(),
                                            curve.coefficients().end());
    return j.dump();
}

BoundaryCurve curve_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("order").get<int>() != kSplineOrder) {
        throw std::invalid_argument("curve_from_json: unsupported spline order");
    }
    KnotVector kv;
    kv.inner = j.at("inner_knots").get<std::vector<double>>();
    const auto outer = j.at("outer_knots").get<std::vector<double>>();
    if (outer.size() != 6) {
        throw std::invalid_argument("curve_from_json: expected 6 outer knots");
    }
    kv.outer_left = {outer[0], outer[1], outer[2]};
    kv.outer_right = {outer[3], outer[4], outer[5]};
    return BoundaryCurve(kv, j.at("coefficients").get<std::vector<double>>());
}

}  // namespace gibbsbd
