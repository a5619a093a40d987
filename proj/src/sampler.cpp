#include "gibbsbd/sampler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace gibbsbd {

namespace {

constexpr double kKnotGapGuard = 1e-9;
constexpr double kSqrtTwoPi = 2.50662827463100050241;

double log_normal_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return -0.5 * z * z - std::log(sd * kSqrtTwoPi);
}

// Sparse closure weights for a fixed knot layout: the solved coefficient is
// beta_0 = sum_j w[j] * beta_j over the free coefficients, where only the
// bases active at theta = 0 or theta = 2*pi contribute.
struct ClosureWeights {
    std::vector<std::pair<int, double>> terms;  // (free coefficient index, weight)

    explicit ClosureWeights(const BoundaryCurve& curve) {
        const int d = curve.inner_knot_count();
        const std::array<double, 4> at0 = curve.basis_at(3, 0.0);
        const std::array<double, 4> at1 = curve.basis_at(d + 1, kTwoPi);
        std::vector<double> diff(static_cast<std::size_t>(curve.basis_count()), 0.0);
        for (int j = 0; j < 4; ++j) {
            diff[static_cast<std::size_t>(j)] -= at0[j];                // bases 0..3 at 0
            diff[static_cast<std::size_t>(d - 2 + j)] += at1[j];        // bases D-2..D+1 at 2*pi
        }
        const double denom = -diff[0];
        if (std::abs(denom) < 1e-12) {
            throw std::runtime_error("ClosureWeights: degenerate closure");
        }
        for (std::size_t j = 1; j < diff.size(); ++j) {
            if (diff[j] != 0.0) {
                terms.emplace_back(static_cast<int>(j), diff[j] / denom);
            }
        }
    }

    double beta0(std::span<const double> coefficients) const {
        double b = 0.0;
        for (const auto& [j, w] : terms) b += coefficients[static_cast<std::size_t>(j)] * w;
        return b;
    }
};

int pick_index(Rng& rng, int count) {
    const int i = static_cast<int>(rng.uniform01() * count);
    return std::min(i, count - 1);
}

bool mh_accept(double log_ratio, Rng& rng) {
    if (log_ratio >= 0.0) return true;
    return std::log(rng.uniform01()) < log_ratio;
}

}  // namespace

void SamplerConfig::validate() const {
    if (n_samples < 1 || burn_in < 0) {
        throw std::invalid_argument("SamplerConfig: need n_samples >= 1 and burn_in >= 0");
    }
    if (!(beta_proposal_sd > 0.0)) {
        throw std::invalid_argument("SamplerConfig: proposal sd must be positive");
    }
    const double total = moves.birth + moves.death + moves.relocate;
    const bool disabled = moves.birth == 0.0 && moves.death == 0.0 && moves.relocate == 0.0;
    if (!disabled && std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("SamplerConfig: move probabilities must sum to 1 (or all be 0)");
    }
    if (moves.birth < 0.0 || moves.death < 0.0 || moves.relocate < 0.0) {
        throw std::invalid_argument("SamplerConfig: move probabilities must be nonnegative");
    }
}

ChainState::ChainState(const Dataset& data, const LossSpec& spec, const PriorSpec& prior,
                       const Frame& frame)
    : cache_(data, spec,
             solve_closure(KnotVector::uniform(12),
                           std::vector<double>(13, 0.1)),
             frame),
      log_prior_(log_prior(cache_.curve(), prior)) {}

ChainState init_state(const Dataset& data, const LossSpec& spec, const PriorSpec& prior,
                      const Frame& frame) {
    return ChainState(data, spec, prior, frame);
}

void step_beta(ChainState& state, const PriorSpec& prior, double proposal_sd, Rng& rng,
               AcceptanceStats& stats) {
    const ClosureWeights closure(state.curve());
    const int n_basis = state.curve().basis_count();
    for (int j = 1; j < n_basis; ++j) {
        ++stats.beta_attempts;
        const std::span<const double> coefs = state.curve().coefficients();
        const double old_value = coefs[static_cast<std::size_t>(j)];
        const double old_beta0 = coefs[0];
        const double value = rng.normal(old_value, proposal_sd);
        if (value <= 0.0) continue;

        // Closure is linear in the coefficients, so re-solve by adjusting the
        // single changed term.
        double beta0 = old_beta0;
        for (const auto& [idx, w] : closure.terms) {
            if (idx == j) {
                beta0 += w * (value - old_value);
                break;
            }
        }
        if (beta0 <= 0.0) continue;

        const double cand_sum = state.cache().try_coefficient(j, value, beta0);
        const double prior_delta =
            -prior.mu_beta * ((value + beta0) - (old_value + old_beta0));
        const double log_ratio = (state.loss_sum() - cand_sum) + prior_delta;
        if (mh_accept(log_ratio, rng)) {
            state.cache().accept_coefficient();
            state.set_log_prior(state.log_prior_value() + prior_delta);
            ++stats.beta_accepts;
        }
    }
}

MoveProbabilities effective_moves(const MoveProbabilities& moves, int d, const PriorSpec& prior) {
    MoveProbabilities eff = moves;
    if (d <= prior.d_min) {
        eff.relocate += eff.death;
        eff.death = 0.0;
    }
    if (d >= prior.d_max) {
        eff.relocate += eff.birth;
        eff.birth = 0.0;
    }
    return eff;
}

double birth_proposal_mean(const BoundaryCurve& current, double knot) {
    const std::span<const double> inner = current.inner_knots();
    const auto it = std::upper_bound(inner.begin(), inner.end(), knot);
    const int pos = static_cast<int>(it - inner.begin());
    const std::span<const double> coefs = current.coefficients();
    // The new coefficient lands at full index pos+1; average its neighbors.
    return 0.5 * (coefs[static_cast<std::size_t>(pos)] +
                  coefs[static_cast<std::size_t>(pos + 1)]);
}

std::optional<JumpProposal> propose_birth(const BoundaryCurve& current, const PriorSpec& prior,
                                          const MoveProbabilities& moves, double knot,
                                          double coefficient) {
    const int d = current.inner_knot_count();
    if (d + 1 > prior.d_max) return std::nullopt;
    if (!(knot > 0.0) || !(knot < kTwoPi) || !(coefficient > 0.0)) return std::nullopt;

    KnotVector kv = current.knot_vector();
    const auto it = std::upper_bound(kv.inner.begin(), kv.inner.end(), knot);
    const int pos = static_cast<int>(it - kv.inner.begin());  // in [1, d-1]
    if (knot - kv.inner[static_cast<std::size_t>(pos - 1)] < kKnotGapGuard ||
        kv.inner[static_cast<std::size_t>(pos)] - knot < kKnotGapGuard) {
        return std::nullopt;
    }
    const double proposal_mean = birth_proposal_mean(current, knot);
    kv.inner.insert(it, knot);

    // The new coefficient slots in at the position matching the knot's order;
    // free index pos corresponds to coefficient index pos+1.
    const std::span<const double> coefs = current.coefficients();
    std::vector<double> free_coefs(coefs.begin() + 1, coefs.end());
    free_coefs.insert(free_coefs.begin() + pos, coefficient);

    std::optional<BoundaryCurve> cand = try_solve_closure(kv, free_coefs);
    if (!cand) return std::nullopt;

    const double beta0_old = coefs[0];
    const double beta0_new = cand->coefficients()[0];
    const double q_birth = effective_moves(moves, d, prior).birth;
    const double q_death = effective_moves(moves, d + 1, prior).death;
    if (q_birth <= 0.0 || q_death <= 0.0) return std::nullopt;

    // The new coefficient is proposed near the local curve level, so its
    // prior factor stays in the ratio against the proposal density.
    const double log_ratio = std::log(prior.mu_d) - std::log(static_cast<double>(d + 1)) -
                             prior.mu_beta * (beta0_new - beta0_old) +
                             std::log(prior.mu_beta) - prior.mu_beta * coefficient -
                             log_normal_pdf(coefficient, proposal_mean, kBirthProposalSd) +
                             std::log(q_death) - std::log(q_birth);
    return JumpProposal{std::move(*cand), log_ratio};
}

std::optional<JumpProposal> propose_death(const BoundaryCurve& current, const PriorSpec& prior,
                                          const MoveProbabilities& moves, int free_knot_index) {
    const int d = current.inner_knot_count();
    if (d - 1 < prior.d_min) return std::nullopt;
    const int n_free = d - 2;
    if (free_knot_index < 0 || free_knot_index >= n_free) return std::nullopt;

    KnotVector kv = current.knot_vector();
    const int pos = free_knot_index + 1;
    kv.inner.erase(kv.inner.begin() + pos);

    const std::span<const double> coefs = current.coefficients();
    const double removed = coefs[static_cast<std::size_t>(pos + 1)];
    std::vector<double> free_coefs(coefs.begin() + 1, coefs.end());
    free_coefs.erase(free_coefs.begin() + pos);

    std::optional<BoundaryCurve> cand = try_solve_closure(kv, free_coefs);
    if (!cand) return std::nullopt;

    // Reverse-birth proposal mean, computed on the reduced state exactly as a
    // birth there would.
    const double reverse_mean =
        birth_proposal_mean(*cand, current.inner_knots()[static_cast<std::size_t>(pos)]);

    const double beta0_old = coefs[0];
    const double beta0_new = cand->coefficients()[0];
    const double q_death = effective_moves(moves, d, prior).death;
    const double q_birth = effective_moves(moves, d - 1, prior).birth;
    if (q_birth <= 0.0 || q_death <= 0.0) return std::nullopt;

    const double log_ratio = std::log(static_cast<double>(d)) - std::log(prior.mu_d) -
                             prior.mu_beta * (beta0_new - beta0_old) -
                             std::log(prior.mu_beta) + prior.mu_beta * removed +
                             log_normal_pdf(removed, reverse_mean, kBirthProposalSd) +
                             std::log(q_birth) - std::log(q_death);
    return JumpProposal{std::move(*cand), log_ratio};
}

std::optional<JumpProposal> propose_relocate(const BoundaryCurve& current, const PriorSpec& prior,
                                             int free_knot_index, double new_knot) {
    const int d = current.inner_knot_count();
    const int n_free = d - 2;
    if (free_knot_index < 0 || free_knot_index >= n_free) return std::nullopt;

    KnotVector kv = current.knot_vector();
    const int pos = free_knot_index + 1;
    const double left = kv.inner[static_cast<std::size_t>(pos - 1)];
    const double right = kv.inner[static_cast<std::size_t>(pos + 1)];
    if (new_knot - left < kKnotGapGuard || right - new_knot < kKnotGapGuard) {
        return std::nullopt;
    }
    kv.inner[static_cast<std::size_t>(pos)] = new_knot;

    const std::span<const double> coefs = current.coefficients();
    const std::vector<double> free_coefs(coefs.begin() + 1, coefs.end());
    std::optional<BoundaryCurve> cand = try_solve_closure(kv, free_coefs);
    if (!cand) return std::nullopt;

    // The knot stays within its bracketing interval, so the forward and
    // reverse proposal intervals coincide and their length ratio is 1; the
    // knot-order prior density is constant in the positions. Only the
    // re-solved closure coefficient changes the prior.
    const double interval_ratio = (right - left) / (right - left);
    const double log_ratio = std::log(interval_ratio) -
                             prior.mu_beta * (cand->coefficients()[0] - coefs[0]);
    return JumpProposal{std::move(*cand), log_ratio};
}

void jump_move(ChainState& state, const PriorSpec& prior, const MoveProbabilities& moves,
               Rng& rng, AcceptanceStats& stats) {
    if (moves.birth == 0.0 && moves.death == 0.0 && moves.relocate == 0.0) return;
    const int d = state.curve().inner_knot_count();
    if (d <= prior.d_min || d >= prior.d_max) ++stats.d_bound_hits;
    const MoveProbabilities eff = effective_moves(moves, d, prior);
    const double u = rng.uniform01();

    std::optional<JumpProposal> proposal;
    std::int64_t* attempts = nullptr;
    std::int64_t* accepts = nullptr;
    if (u < eff.birth) {
        attempts = &stats.birth_attempts;
        accepts = &stats.birth_accepts;
        const double knot = rng.uniform(0.0, kTwoPi);
        const double coefficient =
            rng.normal(birth_proposal_mean(state.curve(), knot), kBirthProposalSd);
        proposal = propose_birth(state.curve(), prior, moves, knot, coefficient);
    } else if (u < eff.birth + eff.death) {
        attempts = &stats.death_attempts;
        accepts = &stats.death_accepts;
        const int index = pick_index(rng, d - 2);
        proposal = propose_death(state.curve(), prior, moves, index);
    } else {
        attempts = &stats.relocate_attempts;
        accepts = &stats.relocate_accepts;
        const int index = pick_index(rng, d - 2);
        const std::span<const double> inner = state.curve().inner_knots();
        const double left = inner[static_cast<std::size_t>(index)];
        const double right = inner[static_cast<std::size_t>(index + 2)];
        const double new_knot = rng.uniform(left, right);
        proposal = propose_relocate(state.curve(), prior, index, new_knot);
    }
    ++*attempts;
    if (!proposal) return;

    const double cand_sum = state.cache().try_curve(proposal->curve);
    const double log_ratio = (state.loss_sum() - cand_sum) + proposal->log_ratio_excluding_loss;
    if (mh_accept(log_ratio, rng)) {
        state.cache().accept_curve();
        state.set_log_prior(log_prior(state.curve(), prior));
        ++*accepts;
    }
}

Chain run_chain(const Dataset& data, const LossSpec& spec, const PriorSpec& prior,
                const SamplerConfig& config, const Frame& frame) {
    config.validate();
    prior.validate();
    spec.validate();
    if (data.records.empty()) {
        throw std::invalid_argument("run_chain: empty dataset");
    }

    ChainState state = init_state(data, spec, prior, frame);
    Rng rng(config.seed);
    Chain chain;
    chain.config = config;
    chain.seed = config.seed;
    chain.draws.reserve(static_cast<std::size_t>(config.n_samples));

    const int total = config.burn_in + config.n_samples;
    for (int iter = 0; iter < total; ++iter) {
        step_beta(state, prior, config.beta_proposal_sd, rng, chain.stats);
        jump_move(state, prior, config.moves, rng, chain.stats);
#ifndef NDEBUG
        if (iter % 1000 == 999) {
            const double fresh = loss_sum(data, state.curve(), spec, frame);
            assert(std::abs(fresh - state.loss_sum()) <= 1e-6);
        }
#endif
        if (iter >= config.burn_in) {
            chain.draws.push_back(state.curve());
        }
    }
    return chain;
}

}  // namespace gibbsbd
