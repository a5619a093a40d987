#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "gibbsbd/model.hpp"
#include "test_util.hpp"

using namespace gibbsbd;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Dataset three_point_data() {
    Dataset d;
    d.records = {{{0.05, 0.0}, -1.0}, {{0.2, 0.1}, 1.0}, {{0.45, -0.3}, 1.0}};
    return d;
}

}  // namespace

TEST_CASE("log_prior support boundaries") {
    const PriorSpec prior;
    Rng rng(41);
    const BoundaryCurve curve = testutil::random_boundary_curve(rng, 5, 12);
    CHECK(std::isfinite(log_prior(curve, prior)));

    PriorSpec narrow = prior;
    narrow.d_min = curve.inner_knot_count() + 1;
    narrow.d_max = 40;
    CHECK(log_prior(curve, narrow) == kNegInf);
    narrow.d_min = 4;
    narrow.d_max = curve.inner_knot_count() - 1;
    CHECK(log_prior(curve, narrow) == kNegInf);
}

TEST_CASE("log_prior hand computation at the initialization state") {
    const PriorSpec prior;  // mu_d = 12, mu_beta = 10
    const BoundaryCurve curve = solve_closure(KnotVector::uniform(12),
                                              std::vector<double>(13, 0.1));
    // Poisson log-pmf at 12 + 14 exponential factors + the knot-order density.
    const double poisson = 12.0 * std::log(12.0) - 12.0 - std::lgamma(13.0);
    const double coef_term = 14.0 * (std::log(10.0) - 1.0);
    const double knot_term = std::lgamma(11.0) - 10.0 * std::log(kTwoPi);
    CHECK(log_prior(curve, prior) ==
          doctest::Approx(poisson + coef_term + knot_term).epsilon(1e-12));
}

TEST_CASE("gibbs kernel equals the prior when no point incurs loss") {
    const PriorSpec prior;
    const BoundaryCurve curve = solve_closure(KnotVector::uniform(12),
                                              std::vector<double>(13, 0.3));
    Dataset data;
    data.records = {{{0.1, 0.0}, 5.0}, {{0.48, 0.0}, -1.0}};  // inside-bright, outside-dull
    const LossSpec spec{1.0, 1.0, 0.0};
    CHECK(log_gibbs_kernel(curve, data, spec, prior) ==
          doctest::Approx(log_prior(curve, prior)).epsilon(1e-12));
}

TEST_CASE("adding a lossy point shifts the kernel by that loss") {
    const PriorSpec prior;
    const BoundaryCurve curve = solve_closure(KnotVector::uniform(12),
                                              std::vector<double>(13, 0.5));
    const LossSpec spec{1.7, 2.9, 0.0};
    Dataset data;
    data.records = {{{0.1, 0.0}, 5.0}};
    const double base = log_gibbs_kernel(curve, data, spec, prior);
    data.records.push_back({{0.2, 0.0}, -1.0});  // inside and dull: loss c
    CHECK(log_gibbs_kernel(curve, data, spec, prior) ==
          doctest::Approx(base - spec.c).epsilon(1e-12));
}

TEST_CASE("kernel differences decompose into loss and prior parts") {
    const PriorSpec prior;
    const Dataset data = three_point_data();
    const LossSpec spec{1.2, 0.9, 0.0};
    Rng rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        const BoundaryCurve a = testutil::random_boundary_curve(rng);
        const BoundaryCurve b = testutil::random_boundary_curve(rng);
        const double lhs = log_gibbs_kernel(a, data, spec, prior) -
                           log_gibbs_kernel(b, data, spec, prior);
        const double rhs = -(loss_sum(data, a, spec) - loss_sum(data, b, spec)) +
                           (log_prior(a, prior) - log_prior(b, prior));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("kernel is monotone in each point's loss") {
    const PriorSpec prior;
    const LossSpec spec{1.0, 1.0, 0.0};
    const BoundaryCurve curve = solve_closure(KnotVector::uniform(12),
                                              std::vector<double>(13, 0.25));
    Dataset data = three_point_data();
    const double base = log_gibbs_kernel(curve, data, spec, prior);
    // Turning a loss-free point into a lossy one can only lower the kernel.
    data.records[1].y = -1.0;  // inside and now dull
    CHECK(log_gibbs_kernel(curve, data, spec, prior) < base);
}

TEST_CASE("kernel exponential is finite and positive on the support") {
    const PriorSpec prior;
    const Dataset data = three_point_data();
    const LossSpec spec{1.0, 2.0, 0.0};
    Rng rng(43);
    for (int rep = 0; rep < 50; ++rep) {
        const BoundaryCurve curve = testutil::random_boundary_curve(rng);
        const double kernel = log_gibbs_kernel(curve, data, spec, prior);
        CHECK(std::isfinite(kernel));
        CHECK(std::exp(kernel) > 0.0);
    }
}

TEST_CASE("prior spec validation") {
    PriorSpec bad;
    bad.mu_d = 0.0;
    CHECK_THROWS(bad.validate());
    bad = PriorSpec{};
    bad.d_min = 3;
    CHECK_THROWS(bad.validate());
    bad = PriorSpec{};
    bad.d_min = 10;
    bad.d_max = 9;
    CHECK_THROWS(bad.validate());
}
