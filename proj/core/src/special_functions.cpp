// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap/special_functions.hpp"

#include "crcap/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace crcap {

namespace {

constexpr double euler_gamma = std::numbers::egamma;
constexpr double series_switch_i0 = 25.0;

// Marcum Q series cutoffs: stop once a term falls below this fraction of the running sum.
constexpr double marcum_relative_cutoff = 1e-14;
constexpr double marcum_absolute_cutoff = 1e-17;
constexpr int marcum_max_terms = 100000;

struct MarcumSums {
    double q = 0.0;           // Q1(a, b)
    double complement = 0.0;  // 1 - Q1(a, b)
};

// Q1(a, b) = P(X > b^2) with X ~ noncentral chi-square(2 dof, a^2). Written as a
// Poisson(mu = a^2/2) mixture of central chi-square(2j+2) tails, each of which is a
// Poisson(y = b^2/2) cdf. The sum starts at the mode of the mixing weights and runs
// both ways so no weight underflows before it matters.
MarcumSums marcum_sums(double a, double b) {
    const double mu = 0.5 * a * a;
    const double y = 0.5 * b * b;

    const double j0 = std::floor(mu);
    const double w0 = (mu == 0.0)
        ? 1.0
        : std::exp(-mu + j0 * std::log(mu) - std::lgamma(j0 + 1.0));

    // Poisson(y) cdf at j0 and the matching pmf.
    const double f0 = boost::math::gamma_q(j0 + 1.0, y);
    const double g0 = boost::math::gamma_p(j0 + 1.0, y);
    const double p0 = std::exp(-y + j0 * std::log(y) - std::lgamma(j0 + 1.0));

    MarcumSums s;
    s.q = w0 * f0;
    s.complement = w0 * g0;
    int terms = 1;

    // Upward from the mode.
    {
        double w = w0, f = f0, g = g0, p = p0;
        for (double j = j0 + 1.0; terms < marcum_max_terms; j += 1.0, ++terms) {
            w *= mu / j;
            p *= y / j;
            f = std::min(1.0, f + p);
            g = std::max(0.0, g - p);
            s.q += w * f;
            s.complement += w * g;
            const double tail_bound = (j + 1.0 > mu) ? w / (1.0 - mu / (j + 1.0)) : w;
            if (tail_bound < marcum_absolute_cutoff
                || tail_bound < marcum_relative_cutoff * std::max(s.q, s.complement)) {
                break;
            }
        }
    }
    // Downward from the mode.
    {
        double w = w0, f = f0, g = g0, p = p0;
        for (double j = j0 - 1.0; j >= 0.0 && terms < marcum_max_terms; j -= 1.0, ++terms) {
            w *= (j + 1.0) / mu;
            f = std::max(0.0, f - p);
            g = std::min(1.0, g + p);
            p *= (j + 1.0) / y;
            s.q += w * f;
            s.complement += w * g;
            if (w < marcum_absolute_cutoff
                || w < marcum_relative_cutoff * std::max(s.q, s.complement)) {
                break;
            }
        }
    }
    s.q = std::clamp(s.q, 0.0, 1.0);
    s.complement = std::clamp(s.complement, 0.0, 1.0);
    return s;
}

void check_marcum_args(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || std::isnan(b)) {
        detail::throw_domain("marcum_q1", "arguments must be finite and nonnegative");
    }
}

} // namespace

double bessel_i0_log(double x) {
    if (!std::isfinite(x) || x < 0.0) {
        detail::throw_domain("bessel_i0_log", "argument must be finite and nonnegative");
    }
    if (x < series_switch_i0) {
        const double q = 0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 500; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return std::log(sum);
    }
    // I0(x) ~ e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * x * k);
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

double exp_scaled_e1(double x) {
    if (std::isnan(x) || x <= 0.0) {
        detail::throw_domain("exp_integral_e1", "argument must be positive");
    }
    if (std::isinf(x)) return 0.0;
    if (x <= 1.0) {
        // -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
        double sum = 0.0;
        double fact = 1.0;  // (-x)^k / k!
        for (int k = 1; k < 60; ++k) {
            fact *= -x / k;
            const double term = fact / k;
            sum += term;
            if (std::abs(term) < 1e-18) break;
        }
        return std::exp(x) * (-euler_gamma - std::log(x) - sum);
    }
    // Continued fraction for e^x E1(x), modified Lentz.
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

double exp_integral_e1(double x) {
    const double scaled = exp_scaled_e1(x);
    if (scaled == 0.0) return 0.0;
    return scaled * std::exp(-x);
}

double marcum_q1(double a, double b) {
    check_marcum_args(a, b);
    if (b == 0.0) return 1.0;
    if (std::isinf(b)) return 0.0;
    if (a == 0.0) return std::exp(-0.5 * b * b);
    return marcum_sums(a, b).q;
}

double marcum_q1_complement(double a, double b) {
    check_marcum_args(a, b);
    if (b == 0.0) return 0.0;
    if (std::isinf(b)) return 1.0;
    if (a == 0.0) return -std::expm1(-0.5 * b * b);
    return marcum_sums(a, b).complement;
}

} // namespace crcap
