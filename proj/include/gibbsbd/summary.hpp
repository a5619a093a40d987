#pragma once

#include <vector>

#include "gibbsbd/geometry.hpp"
#include "gibbsbd/sampler.hpp"

namespace gibbsbd {

inline constexpr int kSummaryGridSize = 200;

// Posterior draws evaluated on a fixed uniform angle grid, with pointwise
// mean and (population) standard deviation.
struct CurveGrid {
    std::vector<double> theta;                // grid_size points in [0, 2*pi)
    std::vector<std::vector<double>> radii;   // one row per draw
    std::vector<double> mean;
    std::vector<double> sd;
};

struct CredibleBand {
    std::vector<double> lower, upper;
    double level = 0.95;
    double tau = 0.0;  // band half-width multiplier
};

CurveGrid posterior_mean_curve(const Chain& chain, int grid_size = kSummaryGridSize);

// Uniform credible band mean +/- tau * sd, where tau is the empirical
// level-quantile (sorted index ceil(level * N)) of the per-draw standardized
// sup-deviations u_i = max_theta |r_i - mean| / max(sd, 1e-12).
CredibleBand uniform_credible_band(const CurveGrid& grid, double level = 0.95);

// The pointwise posterior mean as an evaluable curve.
SampledCurve mean_curve(const CurveGrid& grid);

// Lebesgue measure of the symmetric difference between estimate and truth.
double boundary_error(const RadialCurve& estimate, const RadialCurve& truth);

}  // namespace gibbsbd
