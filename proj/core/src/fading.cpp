// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap/fading.hpp"

#include "crcap/errors.hpp"
#include "crcap/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crcap {

namespace {

constexpr double inv_cdf_tolerance = 1e-12;

void check_alpha_open(const char* where, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) detail::throw_domain(where, "alpha must lie in (0, 1)");
}

void check_nonneg(const char* where, const char* what, double x) {
    if (!(x >= 0.0) || std::isnan(x)) detail::throw_domain(where, std::string(what) + " must be nonnegative");
}

void check_probability_open(const char* where, double p) {
    if (!(p > 0.0 && p < 1.0)) detail::throw_domain(where, "probability must lie in (0, 1)");
}

} // namespace

CsiKnowledge CsiKnowledge::estimated(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        detail::throw_domain("CsiKnowledge::estimated",
                             "alpha must lie in (0, 1); use perfect() for 0 and none() for 1");
    }
    return CsiKnowledge(CsiLevel::estimated, alpha);
}

std::string to_string(const CsiKnowledge& csi) {
    switch (csi.level()) {
    case CsiLevel::none: return "none";
    case CsiLevel::perfect: return "perfect";
    case CsiLevel::estimated: {
        std::ostringstream os;
        os << "estimated(" << csi.alpha() << ")";
        return os.str();
    }
    }
    return "?";
}

double marginal_power_pdf(double gamma) {
    check_nonneg("marginal_power_pdf", "gamma", gamma);
    return std::exp(-gamma);
}

double estimate_power_pdf(double delta, double alpha) {
    check_nonneg("estimate_power_pdf", "delta", delta);
    check_alpha_open("estimate_power_pdf", alpha);
    const double s = 1.0 - alpha;
    return std::exp(-delta / s) / s;
}

double conditional_power_pdf(double gamma, double m, double alpha) {
    check_nonneg("conditional_power_pdf", "gamma", gamma);
    check_nonneg("conditional_power_pdf", "m", m);
    check_alpha_open("conditional_power_pdf", alpha);
    if (m == 0.0) return std::exp(-gamma / alpha) / alpha;
    // -(g + m)/a + ln I0(z) with z = 2 sqrt(m g)/a, regrouped as
    // -(sqrt g - sqrt m)^2 / a + (ln I0(z) - z) so the large terms cancel exactly.
    const double z = 2.0 * std::sqrt(m * gamma) / alpha;
    const double d = std::sqrt(gamma) - std::sqrt(m);
    const double log_pdf = -std::log(alpha) - d * d / alpha + (bessel_i0_log(z) - z);
    return std::exp(log_pdf);
}

double conditional_power_cdf(double gamma, double m, double alpha) {
    check_nonneg("conditional_power_cdf", "gamma", gamma);
    check_nonneg("conditional_power_cdf", "m", m);
    check_alpha_open("conditional_power_cdf", alpha);
    if (m == 0.0) return -std::expm1(-gamma / alpha);
    return marcum_q1_complement(std::sqrt(2.0 * m / alpha), std::sqrt(2.0 * gamma / alpha));
}

double conditional_power_inv_cdf(double p, double m, double alpha) {
    check_probability_open("conditional_power_inv_cdf", p);
    check_nonneg("conditional_power_inv_cdf", "m", m);
    check_alpha_open("conditional_power_inv_cdf", alpha);
    if (m == 0.0) return -alpha * std::log1p(-p);

    double lo = 0.0;
    double hi = m + alpha;
    while (conditional_power_cdf(hi, m, alpha) < p) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double c = conditional_power_cdf(mid, m, alpha);
        if (std::abs(c - p) <= inv_cdf_tolerance * std::min(p, 1.0 - p)) return mid;
        if (c < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

ChannelDraw sample_channel_pair(double alpha, RandomStream& rng) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) detail::throw_domain("sample_channel_pair", "alpha must lie in [0, 1]");
    const double se = std::sqrt(0.5 * (1.0 - alpha));
    const double sr = std::sqrt(0.5 * alpha);
    // Always four normals so the stream layout does not depend on alpha.
    const double er = se * rng.normal();
    const double ei = se * rng.normal();
    const double nr = sr * rng.normal();
    const double ni = sr * rng.normal();
    ChannelDraw d;
    d.estimate_power = er * er + ei * ei;
    d.true_power = (er + nr) * (er + nr) + (ei + ni) * (ei + ni);
    return d;
}

double RayleighFading::marginal_pdf(double gamma) const { return marginal_power_pdf(gamma); }

double RayleighFading::marginal_cdf(double gamma) const {
    check_nonneg("marginal_cdf", "gamma", gamma);
    return -std::expm1(-gamma);
}

double RayleighFading::marginal_quantile(double p) const {
    if (!(p >= 0.0 && p < 1.0)) detail::throw_domain("marginal_quantile", "probability must lie in [0, 1)");
    return -std::log1p(-p);
}

double RayleighFading::marginal_upper_quantile(double tail) const {
    if (!(tail > 0.0 && tail <= 1.0)) detail::throw_domain("marginal_upper_quantile", "tail must lie in (0, 1]");
    return -std::log(tail);
}

double RayleighFading::estimate_pdf(double delta, double alpha) const {
    if (alpha == 0.0) return marginal_pdf(delta);
    return estimate_power_pdf(delta, alpha);
}

double RayleighFading::estimate_cdf(double delta, double alpha) const {
    check_nonneg("estimate_cdf", "delta", delta);
    if (!(alpha >= 0.0 && alpha < 1.0)) detail::throw_domain("estimate_cdf", "alpha must lie in [0, 1)");
    return -std::expm1(-delta / (1.0 - alpha));
}

double RayleighFading::estimate_quantile(double p, double alpha) const {
    if (!(p >= 0.0 && p < 1.0)) detail::throw_domain("estimate_quantile", "probability must lie in [0, 1)");
    if (!(alpha >= 0.0 && alpha < 1.0)) detail::throw_domain("estimate_quantile", "alpha must lie in [0, 1)");
    return -(1.0 - alpha) * std::log1p(-p);
}

double RayleighFading::conditional_pdf(double gamma, double m, double alpha) const {
    return conditional_power_pdf(gamma, m, alpha);
}

double RayleighFading::conditional_cdf(double gamma, double m, double alpha) const {
    return conditional_power_cdf(gamma, m, alpha);
}

double RayleighFading::conditional_inv_cdf(double p, double m, double alpha) const {
    return conditional_power_inv_cdf(p, m, alpha);
}

Interval RayleighFading::conditional_support(double m, double alpha, double tail_mass) const {
    check_nonneg("conditional_support", "m", m);
    check_alpha_open("conditional_support", alpha);
    // |h| = |h_est + h_err| lies within |h_err| of sqrt(m), and
    // P(|h_err| > t) = exp(-t^2 / alpha).
    const double t = std::sqrt(alpha * std::log(2.0 / tail_mass));
    const double r = std::sqrt(m);
    const double lo = std::max(0.0, r - t);
    return {lo * lo, (r + t) * (r + t)};
}

ChannelDraw RayleighFading::sample(double alpha, RandomStream& rng) const {
    return sample_channel_pair(alpha, rng);
}

double RayleighFading::estimate_survival_given_gain(double delta, double gamma, double alpha) const {
    check_nonneg("estimate_survival_given_gain", "delta", delta);
    check_nonneg("estimate_survival_given_gain", "gamma", gamma);
    check_alpha_open("estimate_survival_given_gain", alpha);
    const double v = alpha * (1.0 - alpha);
    if (gamma == 0.0) return std::exp(-delta / v);
    return marcum_q1(std::sqrt(2.0 * (1.0 - alpha) * gamma / alpha), std::sqrt(2.0 * delta / v));
}

std::shared_ptr<const FadingModel> rayleigh_fading() {
    static const auto model = std::make_shared<const RayleighFading>();
    return model;
}

} // namespace crcap
