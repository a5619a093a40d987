#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "gibbsbd/datagen.hpp"
#include "gibbsbd/geometry.hpp"
#include "gibbsbd/loss.hpp"

// Independent analytic and brute-force references used by the test suite.
// The main library never depends on this module; tests compare both sides.
namespace gibbsbd::oracle {

// Areas of the two one-sided differences between a candidate region Gamma and
// the truth Gamma*, with the pixel-location density uniform on Omega so that
// probabilities equal areas.
struct RiskGapInputs {
    double area_true_not_candidate = 0.0;  // lambda(Gamma* \ Gamma)
    double area_candidate_not_true = 0.0;  // lambda(Gamma \ Gamma*)
    CdfPair cdf;                           // F_in(z), F_out(z)
    LossSpec spec;
};

// Expected risk difference R(Gamma) - R(Gamma*) for the threshold loss:
//   lambda(Gamma* \ Gamma) * {k - k F_in(z) - c F_in(z)}
// + lambda(Gamma \ Gamma*) * {c F_out(z) - k + k F_out(z)}.
double risk_gap_continuous(const RiskGapInputs& inputs);

// Binary analogue with weight h, f_in/f_out the inside/outside P(y = +1):
//   lambda(Gamma* \ Gamma) * (h f_in + f_in - 1)
// + lambda(Gamma \ Gamma*) * (1 - f_out - h f_out).
double risk_gap_binary(double area_true_not_candidate, double area_candidate_not_true,
                       double f_in_plus, double f_out_plus, double h);

// Expected exponentiated negative loss difference
//   E[e^{-(l_Gamma - l_Gamma*)}] =
//   P(X not in Gamma* ^ Gamma)
// + {e^{-k}(1 - F_in(z)) + e^c F_in(z)} * lambda(Gamma* \ Gamma)
// + {e^{-c} F_out(z) + e^k - e^k F_out(z)} * lambda(Gamma \ Gamma*).
double exp_loss_diff_expectation(const RiskGapInputs& inputs);

// The larger of the two bracketed factors above; the contraction constant is
// rho = 1 - kappa under the scaling condition.
double exp_loss_diff_kappa(const LossSpec& spec, const CdfPair& cdf);

// One-sided polar areas (lambda(A \ B), lambda(B \ A)) by quadrature, for
// building RiskGapInputs from radial curves.
std::pair<double, double> polar_region_areas(const RadialCurve& a, const RadialCurve& b);

// Fraction of resolution^2 cell centers of Omega lying in exactly one of the
// two regions, times lambda(Omega) = 1. Slow independent check of the polar
// quadrature.
double grid_count_area(const RadialCurve& a, const RadialCurve& b, const Frame& frame,
                       int resolution);

// Exhaustive empirical-risk minimizer over a finite candidate family; ties go
// to the earliest candidate. Throws on an empty family.
std::size_t brute_force_risk_argmin(const Dataset& data, const LossSpec& spec,
                                    std::span<const RadialCurve* const> family,
                                    const Frame& frame = {});

}  // namespace gibbsbd::oracle
