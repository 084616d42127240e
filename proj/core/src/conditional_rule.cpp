// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "conditional_rule.hpp"

#include "root_finding.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace crcap::detail {

ConditionalRule::ConditionalRule(const FadingModel& fading, double m, double alpha, double tail_mass,
                                 double min_scale) {
    using rule = boost::math::quadrature::gauss_kronrod<double, 21>;
    const Interval support = fading.conditional_support(m, alpha, tail_mass);
    std::vector<double> pts;
    constexpr int body = 8;
    for (int i = 0; i <= body; ++i) pts.push_back(support.lo + (support.hi - support.lo) * i / body);
    for (double x = std::max(support.lo, min_scale); x < support.hi; x *= 10.0) {
        if (x > support.lo) pts.push_back(x);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const auto& abscissa = rule::abscissa();
    const auto& weights = rule::weights();
    nodes_.reserve(pts.size() * 21);
    weights_.reserve(pts.size() * 21);
    auto push = [&](double x, double w) {
        const double pdf = fading.conditional_pdf(x, m, alpha);
        if (pdf > 0.0) {
            nodes_.push_back(x);
            weights_.push_back(w * pdf);
        }
    };
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double c = 0.5 * (pts[k] + pts[k + 1]);
        const double h = 0.5 * (pts[k + 1] - pts[k]);
        push(c, h * weights[0]);
        for (std::size_t j = 1; j < abscissa.size(); ++j) {
            push(c - h * abscissa[j], h * weights[j]);
            push(c + h * abscissa[j], h * weights[j]);
        }
    }
}

double ConditionalRule::rate_integral(double power) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * nodes_[i] / (1.0 + power * nodes_[i]);
    return s;
}

double ConditionalRule::log_rate(double power) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * std::log1p(power * nodes_[i]);
    return s;
}

double ConditionalRule::invert(double lambda, double rel_tol) const {
    if (lambda >= rate_integral(0.0)) return 0.0;
    double hi = 1.0 / lambda;
    double f_hi = rate_integral(hi) - lambda;
    double lo = 0.5 * hi;
    double f_lo = rate_integral(lo) - lambda;
    while (f_lo < 0.0) {
        hi = lo;
        f_hi = f_lo;
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;
        f_lo = rate_integral(lo) - lambda;
    }
    if (f_lo == 0.0) return lo;
    auto f = [&](double u) { return rate_integral(std::exp(u)) - lambda; };
    const RootResult r = illinois(
        f, std::log(lo), std::log(hi), f_lo, f_hi,
        [&](double, double fx) { return std::abs(fx) <= rel_tol * lambda; }, 400);
    return std::exp(r.x);
}

} // namespace crcap::detail
