#include "gibbsbd/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gibbsbd {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void PriorSpec::validate() const {
    if (!(mu_d > 0.0) || !(mu_beta > 0.0)) {
        throw std::invalid_argument("PriorSpec: rates must be positive");
    }
    if (d_min < 4 || d_min > d_max) {
        throw std::invalid_argument("PriorSpec: requires 4 <= d_min <= d_max");
    }
}

double log_prior(const BoundaryCurve& curve, const PriorSpec& prior) {
    prior.validate();
    const int d = curve.inner_knot_count();
    if (d < prior.d_min || d > prior.d_max) return kNegInf;

    double lp = d * std::log(prior.mu_d) - prior.mu_d - std::lgamma(d + 1.0);

    // D-2 free inner knots as uniform order statistics on (0, 2*pi).
    lp += std::lgamma(d - 1.0) - (d - 2) * std::log(kTwoPi);

    for (double b : curve.coefficients()) {
        if (!(b > 0.0)) return kNegInf;
        lp += std::log(prior.mu_beta) - prior.mu_beta * b;
    }
    return lp;
}

double log_gibbs_kernel(const BoundaryCurve& curve, const Dataset& data, const LossSpec& spec,
                        const PriorSpec& prior, const Frame& frame) {
    const double lp = log_prior(curve, prior);
    if (lp == kNegInf) return kNegInf;
    return -loss_sum(data, curve, spec, frame) + lp;
}

}  // namespace gibbsbd
