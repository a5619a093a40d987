#pragma once

#include <cmath>
#include <vector>

#include "gibbsbd/geometry.hpp"
#include "gibbsbd/rng.hpp"
#include "gibbsbd/spline.hpp"

namespace testutil {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Positive periodic grid curve with values in [lo, hi].
inline gibbsbd::SampledCurve random_sampled_curve(gibbsbd::Rng& rng, int n = 64,
                                                  double lo = 0.08, double hi = 0.42) {
    std::vector<double> values(static_cast<std::size_t>(n));
    for (double& v : values) v = rng.uniform(lo, hi);
    return gibbsbd::SampledCurve(values);
}

// Random free-knot spline curve: D inner knots with a spacing guard, free
// coefficients around a moderate radius, closure solved (retry until the
// solved coefficient is positive).
inline gibbsbd::BoundaryCurve random_boundary_curve(gibbsbd::Rng& rng, int d_min = 5,
                                                    int d_max = 18) {
    using namespace gibbsbd;
    for (;;) {
        const int d = d_min + static_cast<int>(rng.uniform01() * (d_max - d_min + 1));
        KnotVector kv;
        kv.inner.push_back(0.0);
        std::vector<double> frees;
        for (int i = 0; i < d - 2; ++i) frees.push_back(rng.uniform(0.02, kTwoPi - 0.02));
        std::sort(frees.begin(), frees.end());
        bool spaced = true;
        double prev = 0.0;
        for (double f : frees) {
            if (f - prev < 1e-3) spaced = false;
            prev = f;
        }
        if (!spaced || kTwoPi - prev < 1e-3) continue;
        kv.inner.insert(kv.inner.end(), frees.begin(), frees.end());
        kv.inner.push_back(kTwoPi);

        std::vector<double> coefs(static_cast<std::size_t>(d + 1));
        for (double& c : coefs) c = rng.uniform(0.12, 0.38);
        const auto curve = try_solve_closure(kv, coefs);
        if (curve) return *curve;
    }
}

}  // namespace testutil
