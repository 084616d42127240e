// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap/power_allocation.hpp"

#include "crcap/errors.hpp"
#include "crcap/quadrature.hpp"
#include "conditional_rule.hpp"
#include "link_expectation.hpp"
#include "root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace crcap {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// First state in [lo, hi] where a nondecreasing f reaches level.
template <class F>
double bisect_nondecreasing(F&& f, double lo, double hi, double level, double abs_tol) {
    if (f(lo) >= level) return lo;
    for (int it = 0; it < 200 && hi - lo > abs_tol + 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) >= level) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

} // namespace

// ---------------------------------------------------------------------------
// Settings

void NumericSettings::validate() const {
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0) || !std::isfinite(x)) detail::throw_domain("NumericSettings", std::string(name) + " must be positive");
    };
    positive(quad_rel_tol, "quad_rel_tol");
    positive(quad_abs_tol, "quad_abs_tol");
    positive(tail_mass, "tail_mass");
    positive(bisection_abs_tol, "bisection_abs_tol");
    positive(inversion_rel_tol, "inversion_rel_tol");
    positive(lambda_rel_tol, "lambda_rel_tol");
    positive(table_rel_tol, "table_rel_tol");
    if (tail_mass >= 1e-3) detail::throw_domain("NumericSettings", "tail_mass must be below 1e-3");
    if (quad_max_panels < 1 || lambda_max_iter < 1 || table_max_nodes < 17) {
        detail::throw_domain("NumericSettings", "iteration and node limits are too small");
    }
}

void ScenarioConfig::validate() const {
    if (!(p_avg > 0.0) || !std::isfinite(p_avg)) detail::throw_domain("ScenarioConfig", "p_avg must be positive");
    if (!(i_peak > 0.0) || !std::isfinite(i_peak)) detail::throw_domain("ScenarioConfig", "i_peak must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) detail::throw_domain("ScenarioConfig", "epsilon must lie in (0, 1)");
    if (!fading) detail::throw_domain("ScenarioConfig", "fading model is missing");
    numerics.validate();
}

// ---------------------------------------------------------------------------
// Power components, direct forms

double interference_power_cap(CrossLinkState state, const CsiKnowledge& cl_csi, double i_peak, double epsilon,
                              const FadingModel& fading) {
    if (!(i_peak > 0.0)) detail::throw_domain("interference_power_cap", "i_peak must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) detail::throw_domain("interference_power_cap", "epsilon must lie in (0, 1)");
    if (!(state.power >= 0.0)) detail::throw_domain("interference_power_cap", "cross-link power must be nonnegative");
    switch (cl_csi.level()) {
    case CsiLevel::none: return i_peak / fading.marginal_upper_quantile(epsilon);
    case CsiLevel::perfect: return i_peak / std::max(state.power, cross_gain_floor);
    case CsiLevel::estimated:
        return i_peak / fading.conditional_inv_cdf(1.0 - epsilon, state.power, cl_csi.alpha());
    }
    return inf;
}

double rate_integral(double power, double m_s, double alpha_s, const NumericSettings& numerics,
                     const FadingModel& fading) {
    if (!(power >= 0.0)) detail::throw_domain("rate_integral", "power must be nonnegative");
    if (std::isinf(power)) return 0.0;
    const Interval support = fading.conditional_support(m_s, alpha_s, numerics.tail_mass);
    std::vector<double> pts{support.lo, support.hi};
    if (power > 0.0) detail::add_decade_points(pts, support.lo, support.hi, 1.0 / power);
    std::sort(pts.begin(), pts.end());
    auto integrand = [&](double g) { return g / (1.0 + power * g) * fading.conditional_pdf(g, m_s, alpha_s); };
    QuadratureOptions opt = detail::quad_options(numerics, 1e-5);
    const QuadratureResult r = integrate(integrand, std::span<const double>(pts), opt);
    if (!r.converged) {
        throw NumericalError("rate_integral: quadrature did not converge", r.error);
    }
    return r.value;
}

double invert_rate_integral(double lambda, double m_s, double alpha_s, const NumericSettings& numerics,
                            const FadingModel& fading) {
    if (!(lambda > 0.0)) detail::throw_domain("invert_rate_integral", "lambda must be positive");
    const double at_zero = rate_integral(0.0, m_s, alpha_s, numerics, fading);
    if (lambda >= at_zero) return 0.0;

    // I(P) < 1/P, so the root lies below 1/lambda. Grow the bracket down from there.
    double hi = 1.0 / lambda;
    double f_hi = rate_integral(hi, m_s, alpha_s, numerics, fading) - lambda;
    double lo = 0.5 * hi;
    double f_lo = rate_integral(lo, m_s, alpha_s, numerics, fading) - lambda;
    while (f_lo < 0.0) {
        hi = lo;
        f_hi = f_lo;
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;
        f_lo = rate_integral(lo, m_s, alpha_s, numerics, fading) - lambda;
    }
    if (f_lo == 0.0) return lo;

    const double tol = numerics.inversion_rel_tol * lambda;
    auto f = [&](double u) { return rate_integral(std::exp(u), m_s, alpha_s, numerics, fading) - lambda; };
    const detail::RootResult root = detail::illinois(
        f, std::log(lo), std::log(hi), f_lo, f_hi, [&](double, double fx) { return std::abs(fx) <= tol; }, 400);
    return std::exp(root.x);
}

double power_component_avg(SecondaryLinkState state, const CsiKnowledge& sl_csi, double lambda, double p_avg,
                           const NumericSettings& numerics, const FadingModel& fading) {
    if (!(state.power >= 0.0)) detail::throw_domain("power_component_avg", "secondary state must be nonnegative");
    switch (sl_csi.level()) {
    case CsiLevel::none: return p_avg;
    case CsiLevel::perfect:
        if (!(lambda > 0.0)) detail::throw_domain("power_component_avg", "lambda must be positive");
        if (state.power <= lambda) return 0.0;
        return 1.0 / lambda - 1.0 / state.power;
    case CsiLevel::estimated:
        return invert_rate_integral(lambda, state.power, sl_csi.alpha(), numerics, fading);
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// SecondaryPowerRule

SecondaryPowerRule SecondaryPowerRule::constant(double level) {
    SecondaryPowerRule r;
    r.kind_ = Kind::constant;
    r.level_ = level;
    return r;
}

SecondaryPowerRule SecondaryPowerRule::unlimited() {
    SecondaryPowerRule r;
    r.kind_ = Kind::unlimited;
    r.level_ = inf;
    return r;
}

SecondaryPowerRule SecondaryPowerRule::build(const ScenarioConfig& config, double lambda) {
    SecondaryPowerRule r;
    r.numerics_ = config.numerics;
    r.fading_ = config.fading;
    r.lambda_ = lambda;
    switch (config.sl_csi.level()) {
    case CsiLevel::none:
        r.kind_ = Kind::constant;
        if (config.numerics.rescale_no_csi_power) {
            if (!(lambda > 0.0)) detail::throw_domain("SecondaryPowerRule", "lambda must be positive");
            r.level_ = 1.0 / lambda;
        } else {
            r.level_ = config.p_avg;
            r.lambda_ = 0.0;
        }
        return r;
    case CsiLevel::perfect:
        if (!(lambda > 0.0)) detail::throw_domain("SecondaryPowerRule", "lambda must be positive");
        r.kind_ = Kind::water_filling;
        r.cutoff_ = lambda;
        return r;
    case CsiLevel::estimated: {
        if (!(lambda > 0.0)) detail::throw_domain("SecondaryPowerRule", "lambda must be positive");
        r.kind_ = Kind::rate_inverse;
        r.alpha_ = config.sl_csi.alpha();
        // I(0; m) = m + alpha, so power is positive exactly for m > lambda - alpha.
        r.cutoff_ = std::max(0.0, lambda - r.alpha_);
        r.table_hi_ = config.fading->estimate_quantile(1.0 - config.numerics.tail_mass, r.alpha_);
        if (r.table_hi_ > r.cutoff_) {
            const double cutoff = r.cutoff_;
            auto f = [&](double s) {
                const detail::ConditionalRule rule(*r.fading_, cutoff + s * s, r.alpha_, r.numerics_.tail_mass,
                                                  1e-3 * lambda);
                return rule.invert(lambda, r.numerics_.inversion_rel_tol);
            };
            r.table_ = ChebyshevInterpolant::fit(f, 0.0, std::sqrt(r.table_hi_ - cutoff),
                                                 config.numerics.table_rel_tol, config.numerics.table_max_nodes);
        }
        return r;
    }
    }
    return r;
}

double SecondaryPowerRule::exact(SecondaryLinkState state) const {
    switch (kind_) {
    case Kind::constant:
    case Kind::unlimited: return level_;
    case Kind::water_filling:
        if (state.power <= lambda_) return 0.0;
        return 1.0 / lambda_ - 1.0 / state.power;
    case Kind::rate_inverse: return invert_rate_integral(lambda_, state.power, alpha_, numerics_, *fading_);
    }
    return 0.0;
}

double SecondaryPowerRule::operator()(SecondaryLinkState state) const {
    if (kind_ != Kind::rate_inverse) return exact(state);
    if (cutoff_ > 0.0 && state.power <= cutoff_) return 0.0;
    if (state.power > table_hi_ || !table_.converged()) return exact(state);
    return std::max(0.0, table_(std::sqrt(state.power - cutoff_)));
}

double SecondaryPowerRule::state_reaching(double level) const {
    switch (kind_) {
    case Kind::constant: return level <= level_ ? 0.0 : inf;
    case Kind::unlimited: return 0.0;
    case Kind::water_filling:
        if (level <= 0.0) return cutoff_;
        if (level >= 1.0 / lambda_) return inf;
        return 1.0 / (1.0 / lambda_ - level);
    case Kind::rate_inverse: {
        if (level <= 0.0) return cutoff_;
        if (table_hi_ <= cutoff_) return inf;
        if ((*this)(SecondaryLinkState{table_hi_}) < level) return inf;
        auto f = [&](double m) { return (*this)(SecondaryLinkState{m}); };
        return bisect_nondecreasing(f, cutoff_, table_hi_, level, numerics_.bisection_abs_tol);
    }
    }
    return inf;
}

double SecondaryPowerRule::supremum() const {
    switch (kind_) {
    case Kind::constant:
    case Kind::unlimited: return level_;
    case Kind::water_filling:
    case Kind::rate_inverse: return 1.0 / lambda_;
    }
    return inf;
}

// ---------------------------------------------------------------------------
// InterferenceCapRule

InterferenceCapRule InterferenceCapRule::unconstrained() { return InterferenceCapRule{}; }

InterferenceCapRule InterferenceCapRule::build(const ScenarioConfig& config) {
    InterferenceCapRule r;
    r.csi_ = config.cl_csi;
    r.i_peak_ = config.i_peak;
    r.epsilon_ = config.epsilon;
    r.fading_ = config.fading;
    switch (config.cl_csi.level()) {
    case CsiLevel::none:
        r.kind_ = Kind::constant;
        r.level_ = interference_power_cap({}, config.cl_csi, config.i_peak, config.epsilon, *config.fading);
        break;
    case CsiLevel::perfect: r.kind_ = Kind::inverse_gain; break;
    case CsiLevel::estimated: {
        r.kind_ = Kind::inverse_quantile;
        const double alpha = config.cl_csi.alpha();
        r.table_hi_ = config.fading->estimate_quantile(1.0 - config.numerics.tail_mass, alpha);
        auto f = [&](double s) { return config.fading->conditional_inv_cdf(1.0 - config.epsilon, s * s, alpha); };
        r.table_ = ChebyshevInterpolant::fit(f, 0.0, std::sqrt(r.table_hi_), config.numerics.table_rel_tol,
                                             config.numerics.table_max_nodes);
        break;
    }
    }
    return r;
}

double InterferenceCapRule::quantile(double m) const {
    if (m > table_hi_ || !table_.converged()) {
        return fading_->conditional_inv_cdf(1.0 - epsilon_, m, csi_.alpha());
    }
    return table_(std::sqrt(m));
}

double InterferenceCapRule::exact(CrossLinkState state) const {
    switch (kind_) {
    case Kind::constant:
    case Kind::unconstrained: return level_;
    case Kind::inverse_gain: return i_peak_ / std::max(state.power, cross_gain_floor);
    case Kind::inverse_quantile:
        return i_peak_ / fading_->conditional_inv_cdf(1.0 - epsilon_, state.power, csi_.alpha());
    }
    return inf;
}

double InterferenceCapRule::operator()(CrossLinkState state) const {
    if (kind_ == Kind::inverse_quantile) return i_peak_ / quantile(state.power);
    return exact(state);
}

double InterferenceCapRule::state_reaching(double level) const {
    switch (kind_) {
    case Kind::constant: return level <= level_ ? inf : 0.0;
    case Kind::unconstrained: return inf;
    case Kind::inverse_gain: return level > 0.0 ? i_peak_ / level : inf;
    case Kind::inverse_quantile: {
        if (!(level > 0.0)) return inf;
        // cap >= level  <=>  quantile(m) <= i_peak / level; the quantile grows with m.
        const double q_max = i_peak_ / level;
        if (quantile(0.0) > q_max) return 0.0;
        if (quantile(table_hi_) <= q_max) return inf;
        double lo = 0.0, hi = table_hi_;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi + 1e-300; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (quantile(mid) <= q_max) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return lo;
    }
    }
    return inf;
}

// ---------------------------------------------------------------------------
// Policy

const char* to_string(Regime regime) {
    return regime == Regime::saturated ? "saturated" : "power_limited";
}

PowerPolicy::PowerPolicy(ScenarioConfig config, SecondaryPowerRule secondary, InterferenceCapRule cap, Regime regime,
                         double p_avg_star, double expected_power)
    : config_(std::move(config)),
      secondary_(std::move(secondary)),
      cap_(std::move(cap)),
      regime_(regime),
      p_avg_star_(p_avg_star),
      expected_power_(expected_power) {}

double PowerPolicy::operator()(SecondaryLinkState sl, CrossLinkState cl) const {
    const double cap = cap_(cl);
    if (regime_ == Regime::saturated) return cap;
    return std::min(secondary_(sl), cap);
}

PowerPolicy PowerPolicy::with_lambda(double lambda) const {
    SecondaryPowerRule sl = SecondaryPowerRule::build(config_, lambda);
    const double ep = crcap::expected_power(config_, sl, cap_);
    return PowerPolicy(config_, std::move(sl), cap_, Regime::power_limited, p_avg_star_, ep);
}

double optimal_power(const PowerPolicy& policy, SecondaryLinkState sl, CrossLinkState cl) { return policy(sl, cl); }

double average_power_threshold(const ScenarioConfig& config) {
    config.validate();
    switch (config.cl_csi.level()) {
    case CsiLevel::none:
        return interference_power_cap({}, config.cl_csi, config.i_peak, config.epsilon, *config.fading);
    case CsiLevel::perfect: return inf;
    case CsiLevel::estimated: {
        const InterferenceCapRule cap = InterferenceCapRule::build(config);
        return detail::expected_over_links(config, SecondaryPowerRule::unlimited(), cap, detail::Kernel::power).value;
    }
    }
    return inf;
}

double expected_power(const ScenarioConfig& config, const SecondaryPowerRule& secondary,
                      const InterferenceCapRule& cap) {
    return detail::expected_over_links(config, secondary, cap, detail::Kernel::power).value;
}

PowerPolicy solve_lambda(const ScenarioConfig& config) {
    config.validate();
    return detail::solve_with_cap(config, InterferenceCapRule::build(config), average_power_threshold(config));
}

PowerPolicy detail::solve_with_cap(const ScenarioConfig& config, InterferenceCapRule cap, double p_star) {

    if (config.p_avg >= p_star) {
        return PowerPolicy(config, SecondaryPowerRule::unlimited(), std::move(cap), Regime::saturated, p_star, p_star);
    }
    if (config.sl_csi.is_none() && !config.numerics.rescale_no_csi_power) {
        SecondaryPowerRule sl = SecondaryPowerRule::constant(config.p_avg);
        const double ep = expected_power(config, sl, cap);
        return PowerPolicy(config, std::move(sl), std::move(cap), Regime::power_limited, p_star, ep);
    }

    const double target = config.p_avg;
    auto power_at = [&](double log_lambda) {
        return expected_power(config, SecondaryPowerRule::build(config, std::exp(log_lambda)), cap);
    };
    // E[P] falls as lambda grows; search on u = ln(lambda) with f = ln(E[P] / p_avg).
    auto f = [&](double ep) { return std::log(std::max(ep, 1e-300) / target); };

    double u_hi = 0.0;
    double ep_hi = power_at(u_hi);
    double u_lo = u_hi;
    double ep_lo = ep_hi;
    int guard = 0;
    while (ep_hi >= target) {
        u_lo = u_hi;
        ep_lo = ep_hi;
        u_hi += std::log(2.0);
        ep_hi = power_at(u_hi);
        if (++guard > 2000) throw NumericalError("solve_lambda: expected power does not decay with lambda");
    }
    if (ep_lo < target) {
        const double u_min = std::log(lambda_floor);
        while (ep_lo < target) {
            u_hi = u_lo;
            ep_hi = ep_lo;
            if (u_lo <= u_min) {
                throw NumericalError("solve_lambda: cannot bracket lambda; expected power stays below p_avg "
                                     "down to lambda = 1e-300");
            }
            u_lo = std::max(u_min, u_lo - 8.0);
            ep_lo = power_at(u_lo);
        }
    }

    const double tol = config.numerics.lambda_rel_tol * target;
    double best_u = u_lo;
    double best_ep = ep_lo;
    auto g = [&](double u) {
        const double ep = power_at(u);
        if (std::abs(ep - target) < std::abs(best_ep - target)) {
            best_u = u;
            best_ep = ep;
        }
        return f(ep);
    };
    if (std::abs(ep_hi - target) < std::abs(best_ep - target)) {
        best_u = u_hi;
        best_ep = ep_hi;
    }
    if (std::abs(best_ep - target) > tol) {
        const detail::RootResult root = detail::illinois(
            g, u_lo, u_hi, f(ep_lo), f(ep_hi),
            [&](double, double) { return std::abs(best_ep - target) <= tol; }, config.numerics.lambda_max_iter);
        if (std::abs(best_ep - target) > tol && !root.converged) {
            throw NumericalError("solve_lambda: multiplier search did not converge", std::abs(best_ep - target));
        }
    }
    SecondaryPowerRule sl = SecondaryPowerRule::build(config, std::exp(best_u));
    return PowerPolicy(config, std::move(sl), std::move(cap), Regime::power_limited, p_star, best_ep);
}

} // namespace crcap
