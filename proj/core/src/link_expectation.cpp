// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "link_expectation.hpp"

#include "conditional_rule.hpp"

#include "crcap/chebyshev.hpp"
#include "crcap/errors.hpp"
#include "crcap/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace crcap::detail {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// E[ln(1 + P g)] for g ~ Exp(1).
double constant_power_rate(double power) {
    if (power <= 0.0) return 0.0;
    if (std::isinf(power)) return inf;
    return exp_scaled_e1(1.0 / power);
}

// int_t^inf ln(1 + P g) e^-g dg.
double exponential_rate_tail(double power, double t) {
    if (power <= 0.0) return 0.0;
    return std::exp(-t) * (std::log1p(power * t) + exp_scaled_e1(t + 1.0 / power));
}

// Error bookkeeping: outer estimates add up; an inner integral enters the
// outer value through a probability-weighted average, so the largest inner
// estimate bounds its contribution.
struct Accumulator {
    double outer_error = 0.0;
    double inner_error = 0.0;
    bool converged = true;

    double take(const QuadratureResult& r, bool outer = false) {
        if (outer) {
            outer_error += r.error;
        } else {
            inner_error = std::max(inner_error, r.error);
        }
        converged = converged && r.converged;
        return r.value;
    }
};

std::vector<double> sorted_points(std::vector<double> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

class Engine {
public:
    Engine(const ScenarioConfig& config, const SecondaryPowerRule& secondary, const InterferenceCapRule& cap,
           Kernel kernel)
        : cfg_(config),
          sl_(secondary),
          cap_(cap),
          kernel_(kernel),
          fading_(*config.fading),
          rayleigh_(dynamic_cast<const RayleighFading*>(&fading_) != nullptr) {}

    QuadratureResult run() {
        const double value = outer();
        QuadratureResult r;
        r.value = value;
        r.error = acc_.outer_error + acc_.inner_error;
        r.converged = acc_.converged;
        return r;
    }

private:
    double sl_alpha() const { return cfg_.sl_csi.is_estimated() ? cfg_.sl_csi.alpha() : 0.0; }

    double sl_pdf(double s) const {
        return cfg_.sl_csi.is_estimated() ? fading_.estimate_pdf(s, sl_alpha()) : fading_.marginal_pdf(s);
    }
    double sl_cdf(double s) const {
        if (std::isinf(s)) return 1.0;
        return cfg_.sl_csi.is_estimated() ? fading_.estimate_cdf(s, sl_alpha()) : fading_.marginal_cdf(s);
    }
    double sl_upper() const { return fading_.estimate_quantile(1.0 - cfg_.numerics.tail_mass, sl_alpha()); }

    double rate_at(double power, double s) const {
        return secondary_rate(power, SecondaryLinkState{s}, cfg_);
    }

    // E_s[kernel(min(S(s), K))].
    double middle(double K) {
        if (sl_.is_constant()) {
            const double p = std::min(sl_(SecondaryLinkState{}), K);
            if (std::isinf(p)) throw NumericalError("expected_over_links: unbounded power");
            return kernel_ == Kernel::power ? p : constant_power_rate(p);
        }
        const double lo = sl_.cutoff();
        const double hi_all = sl_upper();
        const bool closed_form = rayleigh_ && cfg_.sl_csi.is_perfect();
        const double sK = closed_form ? sl_.state_reaching(K) : std::min(sl_.state_reaching(K), hi_all);
        double total = 0.0;
        const QuadratureOptions opt = quad_options(cfg_.numerics, 0.1);

        if (closed_form && sK > lo) {
            // Water-filling against Exp(1) gains integrates in closed form.
            const double lam = sl_.lambda();
            const bool open = std::isinf(sK);
            const double e1_diff = exp_integral_e1(lam) - (open ? 0.0 : exp_integral_e1(sK));
            if (kernel_ == Kernel::power) {
                total += std::exp(-lam) * (open ? 1.0 : -std::expm1(lam - sK)) / lam - e1_diff;
            } else {
                total += e1_diff - (open ? 0.0 : std::exp(-sK) * std::log(sK / lam));
            }
        } else if (sK > lo) {
            std::vector<double> pts{lo, sK};
            add_decade_points(pts, lo, sK, lo > 0.0 ? lo : 1e-6);
            pts = sorted_points(std::move(pts));
            if (kernel_ == Kernel::power) {
                auto f = [&](double s) { return std::min(sl_(SecondaryLinkState{s}), K) * sl_pdf(s); };
                total += acc_.take(integrate(f, std::span<const double>(pts), opt));
            } else if (cfg_.sl_csi.is_estimated()) {
                auto f = [&](double s) { return uncapped_rate(s) * sl_pdf(s); };
                total += acc_.take(integrate(f, std::span<const double>(pts), opt));
            } else {
                auto f = [&](double s) { return rate_at(std::min(sl_(SecondaryLinkState{s}), K), s) * sl_pdf(s); };
                total += acc_.take(integrate(f, std::span<const double>(pts), opt));
            }
        }
        if (std::isinf(K)) return total;

        const double capped_from = std::max(sK, lo);
        if (std::isinf(capped_from)) return total;
        if (kernel_ == Kernel::power) {
            total += K * (1.0 - sl_cdf(capped_from));
        } else if (rayleigh_ && cfg_.sl_csi.is_perfect()) {
            total += exponential_rate_tail(K, capped_from);
        } else if (capped_from < hi_all && cfg_.sl_csi.is_estimated()) {
            // E[ln(1 + K g); m > capped_from] taken over g with the reverse conditional
            // Prob{m > capped_from | g}: one integral instead of a nested pair.
            const double alpha = sl_alpha();
            const double g_hi = fading_.marginal_upper_quantile(cfg_.numerics.tail_mass);
            std::vector<double> pts{0.0, g_hi, capped_from / (1.0 - alpha)};
            add_decade_points(pts, 0.0, g_hi, 1e-3 / K);
            pts = sorted_points(std::move(pts));
            pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double x) { return x > g_hi; }), pts.end());
            auto f = [&](double g) {
                return std::log1p(K * g) * fading_.marginal_pdf(g) *
                       fading_.estimate_survival_given_gain(capped_from, g, alpha);
            };
            total += acc_.take(integrate(f, std::span<const double>(pts), opt));
        } else if (capped_from < hi_all) {
            std::vector<double> pts{capped_from, hi_all};
            add_decade_points(pts, capped_from, hi_all, capped_from > 0.0 ? capped_from : 1e-6);
            pts = sorted_points(std::move(pts));
            auto f = [&](double s) { return rate_at(K, s) * sl_pdf(s); };
            total += acc_.take(integrate(f, std::span<const double>(pts), opt));
        }
        return total;
    }

    // E[ln(1 + S(m) g) | m] for the estimated secondary link, from a table in
    // sqrt(m - cutoff) built on first use.
    double uncapped_rate(double m) {
        if (!uncapped_.has_value()) {
            const double lo = sl_.cutoff();
            const double hi = sl_upper();
            auto f = [&](double t) {
                const double mm = lo + t * t;
                return rate_at(sl_(SecondaryLinkState{mm}), mm);
            };
            uncapped_ = ChebyshevInterpolant::fit(f, 0.0, std::sqrt(std::max(hi - lo, 0.0)),
                                                  1e-3 * cfg_.numerics.quad_rel_tol, cfg_.numerics.table_max_nodes);
        }
        if (!uncapped_->converged() || m > uncapped_->hi() * uncapped_->hi() + sl_.cutoff()) {
            return rate_at(sl_(SecondaryLinkState{m}), m);
        }
        return std::max(0.0, (*uncapped_)(std::sqrt(std::max(0.0, m - sl_.cutoff()))));
    }

    double outer() {
        const double p_max = sl_.supremum();
        const QuadratureOptions opt = quad_options(cfg_.numerics, 1.0);
        switch (cfg_.cl_csi.level()) {
        case CsiLevel::none: return middle(cap_(CrossLinkState{}));
        case CsiLevel::perfect: {
            if (cap_.is_unconstrained()) return middle(inf);
            // Below nu_c the cap exceeds every secondary power and the policy ignores g_p.
            const double nu_hi = fading_.marginal_upper_quantile(cfg_.numerics.tail_mass);
            double nu_c = std::isinf(p_max) ? 0.0 : cap_.state_reaching(p_max);
            double total = 0.0;
            if (nu_c > 0.0) total += fading_.marginal_cdf(std::min(nu_c, nu_hi)) * middle(inf);
            if (nu_c >= nu_hi) return total;
            if (!(nu_c > 0.0)) throw NumericalError("expected_over_links: the cap has no lower region to integrate from");
            std::vector<double> pts{std::log(nu_c), std::log(nu_hi)};
            for (double u = std::ceil(pts[0] / std::log(10.0)) * std::log(10.0); u < pts[1]; u += std::log(10.0)) {
                pts.push_back(u);
            }
            pts = sorted_points(std::move(pts));
            auto f = [&](double u) {
                const double nu = std::exp(u);
                return middle(cap_(CrossLinkState{nu})) * fading_.marginal_pdf(nu) * nu;
            };
            return total + acc_.take(integrate(f, std::span<const double>(pts), opt), true);
        }
        case CsiLevel::estimated: {
            if (cap_.is_unconstrained()) return middle(inf);
            const double alpha = cfg_.cl_csi.alpha();
            const double m_hi = fading_.estimate_quantile(1.0 - cfg_.numerics.tail_mass, alpha);
            const double m_c = std::isinf(p_max) ? 0.0 : std::min(cap_.state_reaching(p_max), m_hi);
            double total = 0.0;
            if (m_c > 0.0) total += fading_.estimate_cdf(m_c, alpha) * middle(inf);
            if (m_c >= m_hi) return total;
            std::vector<double> pts{m_c, m_hi};
            add_decade_points(pts, m_c, m_hi, m_c > 0.0 ? m_c : 1e-3);
            pts = sorted_points(std::move(pts));
            auto f = [&](double m) { return middle(cap_(CrossLinkState{m})) * fading_.estimate_pdf(m, alpha); };
            return total + acc_.take(integrate(f, std::span<const double>(pts), opt), true);
        }
        }
        return 0.0;
    }

    const ScenarioConfig& cfg_;
    const SecondaryPowerRule& sl_;
    const InterferenceCapRule& cap_;
    Kernel kernel_;
    const FadingModel& fading_;
    bool rayleigh_;
    Accumulator acc_;
    std::optional<ChebyshevInterpolant> uncapped_;
};

} // namespace

QuadratureOptions quad_options(const NumericSettings& numerics, double tighten) {
    QuadratureOptions opt;
    opt.rel_tol = numerics.quad_rel_tol * tighten;
    opt.abs_tol = numerics.quad_abs_tol * tighten;
    opt.max_panels = numerics.quad_max_panels;
    return opt;
}

void add_decade_points(std::vector<double>& points, double lo, double hi, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) return;
    for (double x = scale; x < hi; x *= 10.0) {
        if (x > lo) points.push_back(x);
    }
}

double secondary_rate(double power, SecondaryLinkState state, const ScenarioConfig& config) {
    if (power <= 0.0) return 0.0;
    switch (config.sl_csi.level()) {
    case CsiLevel::none: return constant_power_rate(power);
    case CsiLevel::perfect: return std::log1p(power * state.power);
    case CsiLevel::estimated: {
        const ConditionalRule rule(*config.fading, state.power, config.sl_csi.alpha(), config.numerics.tail_mass,
                                   1e-3 / power);
        return rule.log_rate(power);
    }
    }
    return 0.0;
}

QuadratureResult expected_over_links(const ScenarioConfig& config, const SecondaryPowerRule& secondary,
                                     const InterferenceCapRule& cap, Kernel kernel) {
    Engine engine(config, secondary, cap, kernel);
    return engine.run();
}

} // namespace crcap::detail
