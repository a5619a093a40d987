#include "gibbsbd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gibbsbd::oracle {

double risk_gap_continuous(const RiskGapInputs& inputs) {
    const double c = inputs.spec.c;
    const double k = inputs.spec.k;
    const double f_in = inputs.cdf.f_in;
    const double f_out = inputs.cdf.f_out;
    return inputs.area_true_not_candidate * (k - k * f_in - c * f_in) +
           inputs.area_candidate_not_true * (c * f_out - k + k * f_out);
}

double risk_gap_binary(double area_true_not_candidate, double area_candidate_not_true,
                       double f_in_plus, double f_out_plus, double h) {
    return area_true_not_candidate * (h * f_in_plus + f_in_plus - 1.0) +
           area_candidate_not_true * (1.0 - f_out_plus - h * f_out_plus);
}

double exp_loss_diff_expectation(const RiskGapInputs& inputs) {
    const double c = inputs.spec.c;
    const double k = inputs.spec.k;
    const double f_in = inputs.cdf.f_in;
    const double f_out = inputs.cdf.f_out;
    const double a1 = inputs.area_true_not_candidate;
    const double a2 = inputs.area_candidate_not_true;
    if (a1 + a2 > 1.0) {
        throw std::invalid_argument("exp_loss_diff_expectation: symmetric difference exceeds Omega");
    }
    const double factor_under = std::exp(-k) * (1.0 - f_in) + std::exp(c) * f_in;
    const double factor_over = std::exp(-c) * f_out + std::exp(k) * (1.0 - f_out);
    return (1.0 - a1 - a2) + factor_under * a1 + factor_over * a2;
}

double exp_loss_diff_kappa(const LossSpec& spec, const CdfPair& cdf) {
    const double factor_under =
        std::exp(-spec.k) * (1.0 - cdf.f_in) + std::exp(spec.c) * cdf.f_in;
    const double factor_over =
        std::exp(-spec.c) * cdf.f_out + std::exp(spec.k) * (1.0 - cdf.f_out);
    return std::max(factor_under, factor_over);
}

std::pair<double, double> polar_region_areas(const RadialCurve& a, const RadialCurve& b) {
    const int n = kSymmDiffPanels;
    const double dt = kTwoPi / n;
    double a_not_b = 0.0;
    double b_not_a = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double theta = (i == n) ? kTwoPi : i * dt;
        const double ra = a.radius(theta);
        const double rb = b.radius(theta);
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        const double diff = 0.5 * (ra * ra - rb * rb);
        if (diff > 0.0) {
            a_not_b += w * diff;
        } else {
            b_not_a -= w * diff;
        }
    }
    return {a_not_b * dt, b_not_a * dt};
}

double grid_count_area(const RadialCurve& a, const RadialCurve& b, const Frame& frame,
                       int resolution) {
    if (resolution < 100) {
        throw std::invalid_argument("grid_count_area: resolution must be >= 100");
    }
    const double cell = 1.0 / resolution;
    std::int64_t count = 0;
    for (int i = 0; i < resolution; ++i) {
        const double x = -kOmegaHalfWidth + (i + 0.5) * cell;
        for (int j = 0; j < resolution; ++j) {
            const double y = -kOmegaHalfWidth + (j + 0.5) * cell;
            const PolarPoint p = to_polar({x, y}, frame);
            const bool in_a = p.r <= a.radius(p.theta);
            const bool in_b = p.r <= b.radius(p.theta);
            if (in_a != in_b) ++count;
        }
    }
    return static_cast<double>(count) / (static_cast<double>(resolution) * resolution);
}

std::size_t brute_force_risk_argmin(const Dataset& data, const LossSpec& spec,
                                    std::span<const RadialCurve* const> family,
                                    const Frame& frame) {
    if (family.empty()) {
        throw std::invalid_argument("brute_force_risk_argmin: empty candidate family");
    }
    std::size_t best = 0;
    double best_risk = empirical_risk(data, *family[0], spec, frame);
    for (std::size_t i = 1; i < family.size(); ++i) {
        const double risk = empirical_risk(data, *family[i], spec, frame);
        if (risk < best_risk) {
            best_risk = risk;
            best = i;
        }
    }
    return best;
}

}  // namespace gibbsbd::oracle
