#include "gibbsbd/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gibbsbd {

void LossSpec::validate() const {
    if (!(c > 0.0) || !(k > 0.0) || !std::isfinite(z)) {
        throw std::invalid_argument("LossSpec: requires c > 0, k > 0 and finite z");
    }
}

double point_loss(const Vec2& x, double y, const RadialCurve& curve, const LossSpec& spec,
                  const Frame& frame) {
    const bool inside = contains(curve, x, frame);
    if (y > spec.z && !inside) return spec.k;
    if (y <= spec.z && inside) return spec.c;
    return 0.0;
}

double loss_sum(const Dataset& data, const RadialCurve& curve, const LossSpec& spec,
                const Frame& frame) {
    if (data.records.empty()) {
        throw std::invalid_argument("loss_sum: empty dataset");
    }
    std::int64_t n_inside_low = 0;
    std::int64_t n_outside_high = 0;
    for (const PixelRecord& rec : data.records) {
        const bool inside = contains(curve, rec.x, frame);
        if (rec.y > spec.z) {
            if (!inside) ++n_outside_high;
        } else {
            if (inside) ++n_inside_low;
        }
    }
    return spec.c * static_cast<double>(n_inside_low) +
           spec.k * static_cast<double>(n_outside_high);
}

double empirical_risk(const Dataset& data, const RadialCurve& curve, const LossSpec& spec,
                      const Frame& frame) {
    return loss_sum(data, curve, spec, frame) / static_cast<double>(data.records.size());
}

namespace {

ConditionVerdict verdict_from_gaps(double gap_left, double gap_right, double tol) {
    if (gap_left < -tol || gap_right < -tol) return ConditionVerdict::invalid;
    if (gap_left <= tol || gap_right <= tol) return ConditionVerdict::boundary;
    return ConditionVerdict::valid;
}

void validate_cdf_pair(const CdfPair& cdf) {
    if (!(cdf.f_in >= 0.0) || !(cdf.f_out <= 1.0) || !(cdf.f_in < cdf.f_out)) {
        throw std::invalid_argument("CdfPair: requires 0 <= F_in(z) < F_out(z) <= 1");
    }
}

}  // namespace

ConditionVerdict check_identifiability(const LossSpec& spec, const CdfPair& cdf) {
    spec.validate();
    validate_cdf_pair(cdf);
    const double ratio = spec.k / (spec.k + spec.c);
    return verdict_from_gaps(ratio - cdf.f_in, cdf.f_out - ratio, 1e-9);
}

double scaling_lower_bound(double c, double k) {
    return std::expm1(k) / std::expm1(c + k);
}

double scaling_upper_bound(double c, double k) {
    return std::expm1(k) / (std::expm1(k) - std::expm1(-c));
}

ConditionVerdict check_scaling_assumption(const LossSpec& spec, const CdfPair& cdf) {
    spec.validate();
    validate_cdf_pair(cdf);
    const double gap_left = scaling_lower_bound(spec.c, spec.k) - cdf.f_in;
    const double gap_right = cdf.f_out - scaling_upper_bound(spec.c, spec.k);
    return verdict_from_gaps(gap_left, gap_right, 1e-6);
}

RiskCache::RiskCache(const Dataset& data, const LossSpec& spec, const BoundaryCurve& initial,
                     const Frame& frame)
    : spec_(spec), curve_(initial) {
    spec.validate();
    if (data.records.empty()) {
        throw std::invalid_argument("RiskCache: empty dataset");
    }
    const std::size_t n = data.records.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<PolarPoint> polar(n);
    for (std::size_t i = 0; i < n; ++i) {
        polar[i] = to_polar(data.records[i].x, frame);
    }
    std::sort(order.begin(), order.end(), [&polar](std::size_t a, std::size_t b) {
        return polar[a].theta < polar[b].theta;
    });
    theta_.resize(n);
    r_.resize(n);
    heavy_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[i];
        theta_[i] = polar[src].theta;
        r_[i] = polar[src].r;
        heavy_[i] = data.records[src].y > spec.z ? 1 : 0;
    }
    gamma_.resize(n);
    gamma_scratch_.resize(n);
    span_.resize(n);
    basis_.resize(n);
    reset(initial);
}

void RiskCache::rebuild_into(const BoundaryCurve& curve, std::vector<int>& span,
                             std::vector<std::array<double, 4>>& basis,
                             std::vector<double>& gamma, std::int64_t& in_low,
                             std::int64_t& out_high) const {
    const std::size_t n = theta_.size();
    span.resize(n);
    basis.resize(n);
    gamma.resize(n);
    in_low = 0;
    out_high = 0;
    const std::span<const double> knots = curve.extended_knots();
    const std::span<const double> coef = curve.coefficients();
    const int last_span = curve.inner_knot_count() + 1;
    int mu = 3;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = theta_[i];
        while (mu < last_span && t >= knots[mu + 1]) ++mu;
        span[i] = mu;
        const std::array<double, 4> b = curve.basis_at(mu, t);
        basis[i] = b;
        double g = 0.0;
        for (int j = 0; j < 4; ++j) g += coef[mu - 3 + j] * b[j];
        gamma[i] = g;
        const bool inside = r_[i] <= g;
        if (heavy_[i]) {
            if (!inside) ++out_high;
        } else {
            if (inside) ++in_low;
        }
    }
}

void RiskCache::reset(const BoundaryCurve& curve) {
    curve_ = curve;
    pending_ = Pending::none;
    rebuild_into(curve_, span_, basis_, gamma_, n_inside_low_, n_outside_high_);
    const int d = curve_.inner_knot_count();
    span_first_.assign(static_cast<std::size_t>(d), theta_.size());
    // span_first_[s-3] = first point index whose span is >= s, for s in [3, D+2].
    std::size_t i = 0;
    for (int s = 3; s <= d + 1; ++s) {
        while (i < span_.size() && span_[i] < s) ++i;
        span_first_[s - 3] = i;
    }
    span_first_.back() = theta_.size();
}

RiskCache::Range RiskCache::span_range(int span_lo, int span_hi) const {
    const int d = curve_.inner_knot_count();
    span_lo = std::clamp(span_lo, 3, d + 1);
    span_hi = std::clamp(span_hi, 3, d + 1);
    return {span_first_[span_lo - 3], span_first_[span_hi - 2]};
}

double RiskCache::try_coefficient(int index, double value, double beta0) {
    const int n_basis = curve_.basis_count();
    if (index <= 0 || index >= n_basis) {
        throw std::out_of_range("RiskCache::try_coefficient: index must be a free coefficient");
    }
    coef_scratch_.assign(curve_.coefficients().begin(), curve_.coefficients().end());
    coef_scratch_[0] = beta0;
    coef_scratch_[static_cast<std::size_t>(index)] = value;

    // Basis `index` covers spans [index, index+3]; the closure coefficient
    // (basis 0) covers span 3 only within the domain.
    pend_range_count_ = 0;
    const Range changed = span_range(index, index + 3);
    const Range closure = span_range(3, 3);
    if (changed.lo <= closure.hi) {
        pend_ranges_[0] = {std::min(closure.lo, changed.lo), std::max(closure.hi, changed.hi)};
        pend_range_count_ = 1;
    } else {
        pend_ranges_[0] = closure;
        pend_ranges_[1] = changed;
        pend_range_count_ = 2;
    }

    std::int64_t in_low = n_inside_low_;
    std::int64_t out_high = n_outside_high_;
    for (int rix = 0; rix < pend_range_count_; ++rix) {
        const Range range = pend_ranges_[rix];
        for (std::size_t i = range.lo; i < range.hi; ++i) {
            const std::array<double, 4>& b = basis_[i];
            const int base = span_[i] - 3;
            double g = 0.0;
            for (int j = 0; j < 4; ++j) g += coef_scratch_[base + j] * b[j];
            gamma_scratch_[i] = g;
            const bool was_inside = r_[i] <= gamma_[i];
            const bool now_inside = r_[i] <= g;
            if (was_inside == now_inside) continue;
            if (heavy_[i]) {
                out_high += was_inside ? 1 : -1;
            } else {
                in_low += now_inside ? 1 : -1;
            }
        }
    }
    pending_ = Pending::coefficient;
    pend_index_ = index;
    pend_value_ = value;
    pend_beta0_ = beta0;
    pend_in_low_ = in_low;
    pend_out_high_ = out_high;
    return spec_.c * static_cast<double>(in_low) + spec_.k * static_cast<double>(out_high);
}

void RiskCache::accept_coefficient() {
    if (pending_ != Pending::coefficient) {
        throw std::logic_error("RiskCache::accept_coefficient: no pending coefficient move");
    }
    for (int rix = 0; rix < pend_range_count_; ++rix) {
        const Range range = pend_ranges_[rix];
        std::copy(gamma_scratch_.begin() + static_cast<std::ptrdiff_t>(range.lo),
                  gamma_scratch_.begin() + static_cast<std::ptrdiff_t>(range.hi),
                  gamma_.begin() + static_cast<std::ptrdiff_t>(range.lo));
    }
    n_inside_low_ = pend_in_low_;
    n_outside_high_ = pend_out_high_;
    std::vector<double> coefs(curve_.coefficients().begin(), curve_.coefficients().end());
    coefs[0] = pend_beta0_;
    coefs[static_cast<std::size_t>(pend_index_)] = pend_value_;
    curve_ = BoundaryCurve(curve_.knot_vector(), std::move(coefs));
    pending_ = Pending::none;
}

double RiskCache::try_curve(const BoundaryCurve& candidate) {
    rebuild_into(candidate, span_scratch_, basis_scratch_, gamma_curve_scratch_, curve_in_low_,
                 curve_out_high_);
    pend_curve_ = candidate;
    pending_ = Pending::curve;
    return spec_.c * static_cast<double>(curve_in_low_) +
           spec_.k * static_cast<double>(curve_out_high_);
}

void RiskCache::accept_curve() {
    if (pending_ != Pending::curve || !pend_curve_.has_value()) {
        throw std::logic_error("RiskCache::accept_curve: no pending curve move");
    }
    curve_ = std::move(*pend_curve_);
    pend_curve_.reset();
    span_.swap(span_scratch_);
    basis_.swap(basis_scratch_);
    gamma_.swap(gamma_curve_scratch_);
    n_inside_low_ = curve_in_low_;
    n_outside_high_ = curve_out_high_;
    const int d = curve_.inner_knot_count();
    span_first_.assign(static_cast<std::size_t>(d), theta_.size());
    std::size_t i = 0;
    for (int s = 3; s <= d + 1; ++s) {
        while (i < span_.size() && span_[i] < s) ++i;
        span_first_[s - 3] = i;
    }
    span_first_.back() = theta_.size();
    pending_ = Pending::none;
}

}  // namespace gibbsbd
