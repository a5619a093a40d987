#include "gibbsbd/summary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gibbsbd {

CurveGrid posterior_mean_curve(const Chain& chain, int grid_size) {
    if (chain.draws.empty()) {
        throw std::invalid_argument("posterior_mean_curve: empty chain");
    }
    if (grid_size < 2) {
        throw std::invalid_argument("posterior_mean_curve: grid_size must be >= 2");
    }
    CurveGrid grid;
    grid.theta.resize(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        grid.theta[static_cast<std::size_t>(i)] = kTwoPi * i / grid_size;
    }
    grid.radii.reserve(chain.draws.size());
    for (const BoundaryCurve& draw : chain.draws) {
        std::vector<double> row(grid.theta.size());
        for (std::size_t j = 0; j < grid.theta.size(); ++j) {
            row[j] = draw.radius(grid.theta[j]);
        }
        grid.radii.push_back(std::move(row));
    }

    const double n = static_cast<double>(grid.radii.size());
    grid.mean.assign(grid.theta.size(), 0.0);
    grid.sd.assign(grid.theta.size(), 0.0);
    for (const std::vector<double>& row : grid.radii) {
        for (std::size_t j = 0; j < row.size(); ++j) grid.mean[j] += row[j];
    }
    for (double& m : grid.mean) m /= n;
    for (const std::vector<double>& row : grid.radii) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double d = row[j] - grid.mean[j];
            grid.sd[j] += d * d;
        }
    }
    for (double& s : grid.sd) s = std::sqrt(s / n);
    return grid;
}

CredibleBand uniform_credible_band(const CurveGrid& grid, double level) {
    if (grid.radii.empty() || grid.mean.empty()) {
        throw std::invalid_argument("uniform_credible_band: empty grid");
    }
    if (!(level > 0.0) || !(level < 1.0)) {
        throw std::invalid_argument("uniform_credible_band: level must be in (0, 1)");
    }
    // The sd floor guards degenerate chains; deviations at or below the floor
    // are rounding residue of the mean and count as zero, so identical draws
    // give u_i = 0 exactly.
    const double floor_sd = 1e-12;
    std::vector<double> u;
    u.reserve(grid.radii.size());
    for (const std::vector<double>& row : grid.radii) {
        double sup = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double dev = std::abs(row[j] - grid.mean[j]);
            if (dev <= floor_sd) continue;
            sup = std::max(sup, dev / std::max(grid.sd[j], floor_sd));
        }
        u.push_back(sup);
    }
    std::sort(u.begin(), u.end());
    const std::size_t n = u.size();
    std::size_t idx = static_cast<std::size_t>(std::ceil(level * static_cast<double>(n)));
    if (idx == 0) idx = 1;
    if (idx > n) idx = n;
    const double tau = u[idx - 1];

    CredibleBand band;
    band.level = level;
    band.tau = tau;
    band.lower.resize(grid.mean.size());
    band.upper.resize(grid.mean.size());
    for (std::size_t j = 0; j < grid.mean.size(); ++j) {
        band.lower[j] = grid.mean[j] - tau * grid.sd[j];
        band.upper[j] = grid.mean[j] + tau * grid.sd[j];
    }
    return band;
}

SampledCurve mean_curve(const CurveGrid& grid) { return SampledCurve(grid.mean); }

double boundary_error(const RadialCurve& estimate, const RadialCurve& truth) {
    return symm_diff_area(estimate, truth);
}

}  // namespace gibbsbd
