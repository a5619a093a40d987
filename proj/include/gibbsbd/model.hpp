#pragma once

#include "gibbsbd/datagen.hpp"
#include "gibbsbd/loss.hpp"
#include "gibbsbd/spline.hpp"

namespace gibbsbd {

// Hierarchical prior on (D, knots, beta): D ~ Poisson(mu_d) truncated to
// [d_min, d_max]; free inner knots are uniform order statistics on (0, 2*pi);
// coefficients are iid Exponential(mu_beta), the closure-solved one included.
struct PriorSpec {
    double mu_d = 12.0;
    double mu_beta = 10.0;
    int d_min = 4;
    int d_max = 40;

    void validate() const;
};

// Log prior density up to the Poisson truncation constant (constant shifts
// cancel in Metropolis-Hastings ratios). Returns -infinity outside the
// support (non-positive coefficient or D outside bounds).
double log_prior(const BoundaryCurve& curve, const PriorSpec& prior);

// Unnormalized log Gibbs posterior: -(sum of point losses) + log_prior.
double log_gibbs_kernel(const BoundaryCurve& curve, const Dataset& data, const LossSpec& spec,
                        const PriorSpec& prior, const Frame& frame = {});

}  // namespace gibbsbd
