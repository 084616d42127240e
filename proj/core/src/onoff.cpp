// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap/onoff.hpp"

#include "crcap/errors.hpp"
#include "crcap/parallel.hpp"
#include "crcap/quadrature.hpp"
#include "crcap/special_functions.hpp"
#include "link_expectation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace crcap {

namespace {

void require_perfect_sl(const ScenarioConfig& config, const char* where) {
    config.validate();
    if (!config.sl_csi.is_perfect()) detail::throw_domain(where, "the on-off scheme needs perfect secondary CSI");
}

double budget_level(double tau, const ScenarioConfig& config) {
    return config.p_avg / (1.0 - config.fading->marginal_cdf(tau));
}

// int_tau^inf ln(1 + P g) e^-g dg.
double rate_above(double power, double tau) {
    if (power <= 0.0) return 0.0;
    return std::exp(-tau) * (std::log1p(power * tau) + exp_scaled_e1(tau + 1.0 / power));
}

double rate_with(double tau, const ScenarioConfig& config, const InterferenceCapRule& cap) {
    const double budget = budget_level(tau, config);
    const FadingModel& fading = *config.fading;
    const QuadratureOptions opt = detail::quad_options(config.numerics, 0.1);
    const double tail = config.numerics.tail_mass;
    switch (config.cl_csi.level()) {
    case CsiLevel::none: return rate_above(std::min(budget, cap(CrossLinkState{})), tau);
    case CsiLevel::perfect: {
        const double nu_hi = fading.marginal_upper_quantile(tail);
        const double nu_c = std::min(cap.state_reaching(budget), nu_hi);
        double total = fading.marginal_cdf(nu_c) * rate_above(budget, tau);
        const double lo = std::log(std::max(nu_c, tail));
        const double hi = std::log(nu_hi);
        if (hi > lo) {
            auto f = [&](double u) {
                const double nu = std::exp(u);
                return rate_above(std::min(budget, cap(CrossLinkState{nu})), tau) * fading.marginal_pdf(nu) * nu;
            };
            total += integrate(f, {lo, hi}, opt).value;
        }
        return total;
    }
    case CsiLevel::estimated: {
        const double alpha = config.cl_csi.alpha();
        const double m_hi = fading.estimate_quantile(1.0 - tail, alpha);
        const double m_c = std::min(cap.state_reaching(budget), m_hi);
        double total = m_c > 0.0 ? fading.estimate_cdf(m_c, alpha) * rate_above(budget, tau) : 0.0;
        if (m_hi > m_c) {
            auto f = [&](double m) {
                return rate_above(std::min(budget, cap(CrossLinkState{m})), tau) * fading.estimate_pdf(m, alpha);
            };
            std::vector<double> pts{m_c, m_hi};
            detail::add_decade_points(pts, m_c, m_hi, m_c > 0.0 ? m_c : 1e-3);
            std::sort(pts.begin(), pts.end());
            total += integrate(f, std::span<const double>(pts), opt).value;
        }
        return total;
    }
    }
    return 0.0;
}

} // namespace

double on_level(double tau, CrossLinkState cl, const ScenarioConfig& config) {
    config.validate();
    if (!(tau >= 0.0)) detail::throw_domain("on_level", "tau must be nonnegative");
    const double cap = interference_power_cap(cl, config.cl_csi, config.i_peak, config.epsilon, *config.fading);
    return std::min(budget_level(tau, config), cap);
}

double onoff_rate(double tau, const ScenarioConfig& config) {
    require_perfect_sl(config, "onoff_rate");
    if (!(tau >= 0.0)) detail::throw_domain("onoff_rate", "tau must be nonnegative");
    if (std::isinf(tau)) return 0.0;
    return rate_with(tau, config, InterferenceCapRule::build(config));
}

ThresholdResult optimize_threshold(const ScenarioConfig& config, unsigned threads) {
    require_perfect_sl(config, "optimize_threshold");
    const InterferenceCapRule cap = InterferenceCapRule::build(config);

    if (config.cl_csi.is_none() && config.p_avg >= cap(CrossLinkState{})) {
        return ThresholdResult{0.0, rate_with(0.0, config, cap)};
    }

    constexpr std::size_t scan = 64;
    const double step = onoff_tau_max / static_cast<double>(scan - 1);
    std::array<double, scan> rates{};
    parallel_for(scan, threads, [&](std::size_t i) { rates[i] = rate_with(step * static_cast<double>(i), config, cap); });
    const std::size_t best = static_cast<std::size_t>(std::max_element(rates.begin(), rates.end()) - rates.begin());

    double a = step * static_cast<double>(best > 0 ? best - 1 : 0);
    double b = step * static_cast<double>(std::min(best + 1, scan - 1));
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = rate_with(x1, config, cap);
    double f2 = rate_with(x2, config, cap);
    while (b - a > 1e-7 * std::max(1.0, b)) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = rate_with(x2, config, cap);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = rate_with(x1, config, cap);
        }
    }
    ThresholdResult r{step * static_cast<double>(best), rates[best]};
    if (f1 > r.rate) r = {x1, f1};
    if (f2 > r.rate) r = {x2, f2};
    return r;
}

OnOffPolicy::OnOffPolicy(ScenarioConfig config, double tau)
    : config_(std::move(config)), cap_(InterferenceCapRule::build(config_)), tau_(tau) {
    require_perfect_sl(config_, "OnOffPolicy");
    if (!(tau >= 0.0)) detail::throw_domain("OnOffPolicy", "tau must be nonnegative");
}

double OnOffPolicy::operator()(SecondaryLinkState sl, CrossLinkState cl) const {
    if (sl.power < tau_) return 0.0;
    return std::min(budget_level(tau_, config_), cap_(cl));
}

} // namespace crcap
