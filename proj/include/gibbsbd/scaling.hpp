#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gibbsbd/loss.hpp"
#include "gibbsbd/spline.hpp"

namespace gibbsbd {

// Simulated annealing settings for the rough boundary estimate used during
// loss scaling: single-coefficient normal moves, geometric cooling, best
// state kept across restarts.
struct AnnealConfig {
    int budget = 20000;  // evaluations per restart
    int restarts = 3;
    double cooling = 0.999;
    double initial_temperature = 0.02;
    double step_sd = 0.05;
    double start_radius = 0.25;
    int knot_count = 12;  // fixed, evenly spaced
};

struct GridPointRecord {
    double z = 0.0;
    double c = 0.0, k = 0.0;  // normalized to c + k = 1 during estimation
    double f_in = 0.0, f_out = 0.0;
    double gap = 0.0;  // f_out - f_in
    bool feasible = false;
    std::string note;
};

struct ScalingReport {
    double c = 0.0, k = 0.0, z = 0.0;  // final solved values
    std::vector<GridPointRecord> grid;
    int chosen_index = -1;
    std::optional<BoundaryCurve> point_estimate;  // fit at the chosen threshold
};

// Interior empirical quantiles of the intensities at levels i/(g+1),
// deduplicated. Throws when the intensities are all identical.
std::vector<double> z_grid(const Dataset& data, int g);

// The (c, k) pair with c + k = 1 and k/(k+c) equal to the empirical fraction
// of intensities at or below z. Throws when the fraction is 0 or 1.
std::pair<double, double> ratio_ck(const Dataset& data, double z);

// Rough empirical-risk minimizer over coefficients with fixed evenly spaced
// knots, by simulated annealing. Deterministic given the seed.
BoundaryCurve fit_point_estimate(const Dataset& data, const LossSpec& spec,
                                 const AnnealConfig& anneal, std::uint64_t seed,
                                 const Frame& frame = {});

// Sample proportions of {y <= z} inside and outside the estimated region.
// Throws when either region holds no pixels.
CdfPair estimate_f(const Dataset& data, const RadialCurve& curve, double z,
                   const Frame& frame = {});

// The unique positive (c, k) making both scaling inequalities equalities:
//   f_in = (e^k - 1)/(e^{c+k} - 1),  f_out = (e^k - 1)/(e^k - e^{-c}),
// for 0 < f_in < f_out < 1, by damped Newton with a differenced Jacobian.
std::pair<double, double> solve_ck(double f_in, double f_out);

// Full threshold selection: for each grid threshold fit a rough boundary,
// estimate the inside/outside distribution functions, pick the threshold with
// the widest estimated gap (ties toward the smaller threshold), and solve for
// the final (c, k) there.
ScalingReport estimate_ckz(const Dataset& data, std::uint64_t seed, int grid_count = 19,
                           const AnnealConfig& anneal = {}, const Frame& frame = {});

}  // namespace gibbsbd
