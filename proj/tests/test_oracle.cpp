#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "gibbsbd/oracle.hpp"
#include "gibbsbd/rng.hpp"
#include "test_util.hpp"

using namespace gibbsbd;
using namespace gibbsbd::oracle;

namespace {

// Monte Carlo estimate of E[f(X, Y)] under the truth model: X uniform on
// Omega, Y ~ N(mu_in, sd_in) inside the truth region else N(mu_out, sd_out).
template <typename F>
std::pair<double, double> mc_mean(const RadialCurve& truth, double mu_in, double sd_in,
                                  double mu_out, double sd_out, int n, std::uint64_t seed,
                                  F&& f) {
    Rng rng(seed);
    const Frame origin;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        const bool inside = contains(truth, x, origin);
        const double y = inside ? rng.normal(mu_in, sd_in) : rng.normal(mu_out, sd_out);
        const double v = f(x, y);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

}  // namespace

TEST_CASE("risk gaps vanish when the candidate equals the truth") {
    const RiskGapInputs same{0.0, 0.0, {0.1431, 0.9192}, {1.86, 2.36, 2.40}};
    CHECK(risk_gap_continuous(same) == 0.0);
    CHECK(risk_gap_binary(0.0, 0.0, 0.5, 0.2, 1.0) == 0.0);
    CHECK(exp_loss_diff_expectation(same) == 1.0);
}

TEST_CASE("binary risk gap arithmetic") {
    CHECK(risk_gap_binary(0.01, 0.02, 0.5, 0.2, 1.0) == doctest::Approx(0.012).epsilon(1e-12));
}

TEST_CASE("binary gap equals the continuous gap under the reduction") {
    Rng rng(101);
    for (int rep = 0; rep < 100; ++rep) {
        const double a1 = rng.uniform(0.0, 0.2);
        const double a2 = rng.uniform(0.0, 0.2);
        const double f_in = rng.uniform(0.3, 0.9);
        const double f_out = rng.uniform(0.05, f_in - 0.05);
        const double h = rng.uniform(0.2, 3.0);
        // Binary y in {-1,+1} at threshold 0: F(0) = 1 - P(y = +1).
        const RiskGapInputs inputs{a1, a2, {1.0 - f_in, 1.0 - f_out}, {1.0, h, 0.0}};
        CHECK(risk_gap_binary(a1, a2, f_in, f_out, h) ==
              doctest::Approx(risk_gap_continuous(inputs)).epsilon(1e-12));
    }
}

TEST_CASE("risk gap is positive under identifiability whenever regions differ") {
    Rng rng(102);
    for (int rep = 0; rep < 200; ++rep) {
        const double f_in = rng.uniform(0.02, 0.6);
        const double f_out = rng.uniform(f_in + 0.05, 0.98);
        // Pick (c, k) meeting the identifiability window strictly.
        const double mid = rng.uniform(f_in + 0.01, f_out - 0.01);
        const double k = mid;
        const double c = 1.0 - mid;
        RiskGapInputs inputs{0.0, 0.0, {f_in, f_out}, {c, k, 0.0}};
        inputs.area_true_not_candidate = rng.uniform(0.0, 0.3);
        inputs.area_candidate_not_true = rng.uniform(0.0, 0.3);
        if (inputs.area_true_not_candidate + inputs.area_candidate_not_true == 0.0) continue;
        CHECK(risk_gap_continuous(inputs) > 0.0);
        // Lower bound from the proof: total area times the smaller factor.
        const double factor_under = k - k * f_in - c * f_in;
        const double factor_over = c * f_out - k + k * f_out;
        const double bound = (inputs.area_true_not_candidate + inputs.area_candidate_not_true) *
                             std::min(factor_under, factor_over);
        CHECK(risk_gap_continuous(inputs) >= bound - 1e-12);
    }
}

TEST_CASE("continuous risk gap agrees with Monte Carlo") {
    // Truth circle 0.25; candidates nested on both sides so each linear term
    // is exercised; C1-style normal intensities.
    const ConstantCurve truth(0.25);
    const double z = 2.40;
    const CdfPair cdf{testutil::normal_cdf((z - 4.0) / 1.5), testutil::normal_cdf((z - 1.0) / 1.0)};
    const LossSpec spec{1.86, 2.36, z};
    const Frame origin;

    for (double candidate_radius : {0.22, 0.28}) {
        const ConstantCurve candidate(candidate_radius);
        const auto [a_not_b, b_not_a] = polar_region_areas(truth, candidate);
        const RiskGapInputs inputs{a_not_b, b_not_a, cdf, spec};
        const double analytic = risk_gap_continuous(inputs);

        const auto [mc, se] = mc_mean(
            truth, 4.0, 1.5, 1.0, 1.0, 1000000, 7,
            [&](const Vec2& x, double y) {
                return point_loss(x, y, candidate, spec, origin) -
                       point_loss(x, y, truth, spec, origin);
            });
        CHECK(std::abs(mc - analytic) <= 3.0 * se);
    }
}

TEST_CASE("exponentiated loss-difference expectation agrees with Monte Carlo and contracts") {
    const ConstantCurve truth(0.25);
    const double z = 2.40;
    const CdfPair cdf{testutil::normal_cdf((z - 4.0) / 1.5), testutil::normal_cdf((z - 1.0) / 1.0)};
    // Stay strictly inside the scaling region by shrinking the boundary pair.
    const auto [c_opt, k_opt] = [&] {
        const double a = cdf.f_in, b = cdf.f_out;
        // Equalities hold at the optimum; halving gives strict slack.
        const double c = 1.86 / 2.0, k = 2.36 / 2.0;
        (void)a;
        (void)b;
        return std::make_pair(c, k);
    }();
    const LossSpec spec{c_opt, k_opt, z};
    REQUIRE(check_scaling_assumption(spec, cdf) == ConditionVerdict::valid);
    const Frame origin;

    const ConstantCurve candidate(0.28);
    const auto [a_not_b, b_not_a] = polar_region_areas(truth, candidate);
    const RiskGapInputs inputs{a_not_b, b_not_a, cdf, spec};
    const double analytic = exp_loss_diff_expectation(inputs);

    const double kappa = exp_loss_diff_kappa(spec, cdf);
    CHECK(kappa < 1.0);
    const double rho = 1.0 - kappa;
    CHECK(analytic < 1.0 - rho * (a_not_b + b_not_a) + 1e-12);

    const auto [mc, se] = mc_mean(
        truth, 4.0, 1.5, 1.0, 1.0, 1000000, 8,
        [&](const Vec2& x, double y) {
            return std::exp(-(point_loss(x, y, candidate, spec, origin) -
                              point_loss(x, y, truth, spec, origin)));
        });
    CHECK(std::abs(mc - analytic) <= 3.0 * se);
}

TEST_CASE("polar region areas split the symmetric difference") {
    Rng rng(103);
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = testutil::random_sampled_curve(rng);
        const auto b = testutil::random_sampled_curve(rng);
        const auto [a_not_b, b_not_a] = polar_region_areas(a, b);
        CHECK(a_not_b >= 0.0);
        CHECK(b_not_a >= 0.0);
        CHECK(a_not_b + b_not_a == doctest::Approx(symm_diff_area(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("grid counting reproduces the annulus area") {
    const Frame origin;
    const ConstantCurve a(0.2), b(0.3);
    CHECK(std::abs(grid_count_area(a, b, origin, 2000) - 0.15708) < 1e-3);
    CHECK(grid_count_area(a, a, origin, 500) == 0.0);
    CHECK_THROWS(grid_count_area(a, b, origin, 50));
}

TEST_CASE("grid counting converges to the polar quadrature") {
    Rng rng(104);
    const Frame origin;
    const auto a = testutil::random_sampled_curve(rng, 32, 0.1, 0.4);
    const auto b = testutil::random_sampled_curve(rng, 32, 0.1, 0.4);
    const double quad = symm_diff_area(a, b);
    double prev = std::abs(grid_count_area(a, b, origin, 250) - quad);
    for (int resolution : {500, 1000, 2000}) {
        const double err = std::abs(grid_count_area(a, b, origin, resolution) - quad);
        CHECK(err < prev + 2.0 / resolution);
        CHECK(err <= 2.0 / resolution);
        prev = err;
    }
}

TEST_CASE("brute force argmin recovers the circle truth") {
    // Circle truth with binary intensities and a valid loss weight: the
    // exhaustive minimizer over circle radii lands on the truth.
    Rng rng(105);
    const Frame origin;
    const ConstantCurve truth(0.25);
    Dataset data;
    for (int i = 0; i < 10000; ++i) {
        const Vec2 x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        const bool inside = contains(truth, x, origin);
        data.records.push_back({x, rng.bernoulli(inside ? 0.5 : 0.2) ? 1.0 : -1.0});
    }

    std::vector<ConstantCurve> circles;
    std::vector<const RadialCurve*> family;
    for (int i = 0; i <= 40; ++i) circles.emplace_back(0.05 + 0.01 * i);
    for (const auto& c : circles) family.push_back(&c);

    // Valid weighting: 1/(1+h) strictly between 0.2 and 0.5.
    const double h = 2.0 / (0.5 + 0.2) - 1.0;
    const std::size_t best = brute_force_risk_argmin(data, LossSpec::binary(h), family);
    CHECK(circles[best].value() == doctest::Approx(0.25).epsilon(1e-12));

    // Family of one candidate returns that candidate.
    std::vector<const RadialCurve*> single{family[3]};
    CHECK(brute_force_risk_argmin(data, LossSpec::binary(h), single) == 0);
    CHECK_THROWS(brute_force_risk_argmin(data, LossSpec::binary(h),
                                         std::span<const RadialCurve* const>{}));
}

TEST_CASE("badly weighted loss drifts the argmin to the family maximum") {
    // Overall-bright image with h = 1: bright pixels outside dominate, so the
    // empirical minimizer swallows the whole frame.
    Rng rng(106);
    const Frame origin;
    const ConstantCurve truth(0.25);
    Dataset data;
    for (int i = 0; i < 10000; ++i) {
        const Vec2 x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        const bool inside = contains(truth, x, origin);
        data.records.push_back({x, rng.bernoulli(inside ? 0.8 : 0.75) ? 1.0 : -1.0});
    }
    std::vector<ConstantCurve> circles;
    std::vector<const RadialCurve*> family;
    for (int i = 0; i <= 40; ++i) circles.emplace_back(0.05 + 0.01 * i);
    for (const auto& c : circles) family.push_back(&c);

    const std::size_t best = brute_force_risk_argmin(data, LossSpec::binary(1.0), family);
    CHECK(best == family.size() - 1);
}
