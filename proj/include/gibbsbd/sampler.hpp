#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gibbsbd/loss.hpp"
#include "gibbsbd/model.hpp"
#include "gibbsbd/rng.hpp"
#include "gibbsbd/spline.hpp"

namespace gibbsbd {

struct MoveProbabilities {
    double birth = 1.0 / 3.0;
    double death = 1.0 / 3.0;
    double relocate = 1.0 / 3.0;
};

struct SamplerConfig {
    int n_samples = 4000;
    int burn_in = 1000;
    double beta_proposal_sd = 0.10;
    MoveProbabilities moves;
    std::uint64_t seed = 1;

    // Move probabilities must sum to 1, or all be 0 to disable jump moves
    // (fixed-dimension runs).
    void validate() const;
};

struct AcceptanceStats {
    std::int64_t beta_attempts = 0, beta_accepts = 0;
    std::int64_t birth_attempts = 0, birth_accepts = 0;
    std::int64_t death_attempts = 0, death_accepts = 0;
    std::int64_t relocate_attempts = 0, relocate_accepts = 0;
    // Iterations that found D at a truncation bound; expected to stay 0 in
    // the simulation scenarios (the bounds are a computational device only).
    std::int64_t d_bound_hits = 0;

    static double rate(std::int64_t accepts, std::int64_t attempts) {
        return attempts == 0 ? 0.0 : static_cast<double>(accepts) / static_cast<double>(attempts);
    }
};

// Current curve plus cached loss sum (exact integer counts inside RiskCache)
// and cached log prior.
class ChainState {
public:
    ChainState(const Dataset& data, const LossSpec& spec, const PriorSpec& prior,
               const Frame& frame = {});

    const BoundaryCurve& curve() const { return cache_.curve(); }
    double loss_sum() const { return cache_.loss_sum(); }
    double log_prior_value() const { return log_prior_; }
    double log_kernel() const { return -loss_sum() + log_prior_; }

    RiskCache& cache() { return cache_; }
    const RiskCache& cache() const { return cache_; }
    void set_log_prior(double lp) { log_prior_ = lp; }

private:
    RiskCache cache_;
    double log_prior_;
};

// Initial state: D = 12 evenly spaced inner knots, free coefficients 0.1,
// closure solved (a constant 0.1 circle).
ChainState init_state(const Dataset& data, const LossSpec& spec, const PriorSpec& prior,
                      const Frame& frame = {});

// Metropolis-within-Gibbs sweep over the free coefficients in index order;
// normal proposals centered at the current values, closure re-solved per
// proposal. Non-positive or closure-infeasible proposals are rejected.
void step_beta(ChainState& state, const PriorSpec& prior, double proposal_sd, Rng& rng,
               AcceptanceStats& stats);

// One birth/death/relocate attempt drawn from the move probabilities (mass of
// moves blocked by the D bounds is shifted to relocate).
void jump_move(ChainState& state, const PriorSpec& prior, const MoveProbabilities& moves,
               Rng& rng, AcceptanceStats& stats);

// Birth moves propose the new coefficient near the local curve level (a
// truncated-normal around the mean of the two flanking coefficients); a
// prior-drawn coefficient at rate mu_beta sits far below typical radii and
// would stall dimension changes.
inline constexpr double kBirthProposalSd = 0.10;

// Mean of the birth-coefficient proposal for inserting a knot into `current`.
double birth_proposal_mean(const BoundaryCurve& current, double knot);

// A candidate produced by a jump move, exposed for direct testing of the
// acceptance arithmetic. log_ratio_excluding_loss carries every term of the
// log acceptance ratio except -(candidate loss sum - current loss sum), which
// the caller adds after evaluating the candidate against the data.
struct JumpProposal {
    BoundaryCurve curve;
    double log_ratio_excluding_loss;
};

// nullopt when the move is blocked (D at a bound, closure infeasible, or the
// proposed knot collides with an existing one).
std::optional<JumpProposal> propose_birth(const BoundaryCurve& current, const PriorSpec& prior,
                                          const MoveProbabilities& moves, double knot,
                                          double coefficient);
std::optional<JumpProposal> propose_death(const BoundaryCurve& current, const PriorSpec& prior,
                                          const MoveProbabilities& moves, int free_knot_index);
std::optional<JumpProposal> propose_relocate(const BoundaryCurve& current, const PriorSpec& prior,
                                             int free_knot_index, double new_knot);

// Effective move probabilities at inner-knot count d (bound-blocked mass is
// moved to relocate).
MoveProbabilities effective_moves(const MoveProbabilities& moves, int d, const PriorSpec& prior);

struct Chain {
    std::vector<BoundaryCurve> draws;
    AcceptanceStats stats;
    SamplerConfig config;
    std::uint64_t seed = 0;
};

// burn_in + n_samples iterations of (beta sweep; jump move); keeps the
// post-burn-in draws. Fully determined by config.seed.
Chain run_chain(const Dataset& data, const LossSpec& spec, const PriorSpec& prior,
                const SamplerConfig& config, const Frame& frame = {});

}  // namespace gibbsbd
