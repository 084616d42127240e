// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors
//
// Reference implementations for the tests. They share no code with the
// library: boost special functions and boost quadrature, brute-force nesting,
// and separate root finders.

#ifndef CRCAP_TESTS_ORACLES_HPP
#define CRCAP_TESTS_ORACLES_HPP

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

/// ln I0(x) from 200 terms of the power series in 50-digit arithmetic.
inline double ln_i0_series(double x) {
    Big h = Big(x) / 2;
    Big h2 = h * h;
    Big term = 1;
    Big sum = 1;
    for (int k = 1; k < 200; ++k) {
        term *= h2 / (Big(k) * Big(k));
        sum += term;
    }
    return static_cast<double>(log(sum));
}

/// E1(x) = -gamma - ln x + sum (-1)^{k+1} x^k / (k k!), 50 digits.
inline double e1_series(double x) {
    const Big bx = x;
    Big term = 1;
    Big sum = 0;
    for (int k = 1; k < 400; ++k) {
        term *= bx / k;
        const Big add = term / k;
        sum += (k % 2 ? add : -add);
        if (add < Big(1e-45) * abs(sum)) break;
    }
    return static_cast<double>(-boost::math::constants::euler<Big>() - log(bx) + sum);
}

/// Marcum Q1 from its defining integral.
inline double marcum_q1_integral(double a, double b) {
    auto f = [a](double t) {
        // t exp(-(t^2 + a^2)/2) I0(a t) written with the scaled Bessel function.
        const double z = a * t;
        const double i0e = z > 0 ? boost::math::cyl_bessel_i(0, z) * std::exp(-z) : 1.0;
        return t * std::exp(-0.5 * (t - a) * (t - a)) * i0e;
    };
    const double upper = std::max(a, b) + 40.0;
    if (b >= upper) return 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, b, upper, 1e-14);
}

/// Adaptive Gauss-Kronrod from boost on [a, b].
template <class F>
double gk(F f, double a, double b, double tol = 1e-11) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

/// Conditional (1 - eps) quantile of g given m under the estimation model.
inline double conditional_quantile(double p, double m, double alpha) {
    if (m == 0.0) return -alpha * std::log1p(-p);
    boost::math::non_central_chi_squared_distribution<double> d(2.0, 2.0 * m / alpha);
    return 0.5 * alpha * boost::math::quantile(d, p);
}

inline double conditional_pdf(double g, double m, double alpha) {
    if (m == 0.0) return std::exp(-g / alpha) / alpha;
    boost::math::non_central_chi_squared_distribution<double> d(2.0, 2.0 * m / alpha);
    return 2.0 / alpha * boost::math::pdf(d, 2.0 * g / alpha);
}

/// Root of a decreasing function by plain bisection on ln x in [lo, hi].
inline double bisect_log(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (a + b);
        if (f(std::exp(mid)) > 0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return std::exp(0.5 * (a + b));
}

/// e^x E1(x).
inline double scaled_e1(double x) { return std::exp(x) * boost::math::expint(1, x); }

/// Capacity with perfect secondary CSI and estimated cross-link CSI, written
/// out directly: C = int f(m) int ln(1 + min([1/l - 1/g]^+, I / q(m)) g) e^-g dg dm,
/// with l from E[min(...)] = p_avg by bisection (or the cap alone past saturation).
struct PerfectSlEstimatedCl {
    double alpha_p, i_peak, epsilon, p_avg;

    double cap(double m) const { return i_peak / conditional_quantile(1.0 - epsilon, m, alpha_p); }
    double f(double m) const { return std::exp(-m / (1.0 - alpha_p)) / (1.0 - alpha_p); }
    double m_hi() const { return -(1.0 - alpha_p) * std::log(1e-13); }

    double p_star() const {
        return gk([&](double m) { return cap(m) * f(m); }, 0.0, m_hi());
    }
    double inner_power(double l, double k) const {
        // int_l^inf min(1/l - 1/g, k) e^-g dg, split where the cap starts to bind.
        const double g_k = (k >= 1.0 / l) ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 / l - k);
        const double hi = std::min(g_k, 60.0);
        double v = gk([&](double g) { return (1.0 / l - 1.0 / g) * std::exp(-g); }, l, hi);
        if (g_k < 60.0) v += k * std::exp(-g_k);
        return v;
    }
    double inner_rate(double l, double k) const {
        const double g_k = (k >= 1.0 / l) ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 / l - k);
        const double hi = std::min(g_k, 60.0);
        double v = gk([&](double g) { return std::log(g / l) * std::exp(-g); }, l, hi);
        if (g_k < 60.0) v += gk([&](double g) { return std::log1p(k * g) * std::exp(-g); }, g_k, 60.0);
        return v;
    }
    double power(double l) const {
        return gk([&](double m) { return inner_power(l, cap(m)) * f(m); }, 0.0, m_hi(), 1e-9);
    }
    double lambda() const {
        return bisect_log([&](double l) { return power(l) - p_avg; }, 1e-12, 100.0, 45);
    }
    bool saturated() const { return p_avg >= p_star(); }
    double capacity(double l) const {
        if (saturated()) {
            return gk([&](double m) { return scaled_e1(1.0 / cap(m)) * f(m); }, 0.0, m_hi());
        }
        return gk([&](double m) { return inner_rate(l, cap(m)) * f(m); }, 0.0, m_hi(), 1e-9);
    }
};

/// Capacity with estimated secondary CSI and perfect cross-link CSI, written
/// out directly: C = int e^-v int f(m) int ln(1 + min(P(m), I/v) g) p(g|m) dg dm dv
/// with P(m) = [I_m^-1(l)]^+ from per-state bisection.
struct EstimatedSlPerfectCl {
    double alpha_s, i_peak, p_avg;

    double f(double m) const { return std::exp(-m / (1.0 - alpha_s)) / (1.0 - alpha_s); }
    double m_hi() const { return -(1.0 - alpha_s) * std::log(1e-12); }
    double g_hi(double m) const { return std::pow(std::sqrt(m) + std::sqrt(alpha_s * 30.0), 2); }

    double rate_integral(double p, double m) const {
        return gk([&](double g) { return g / (1.0 + p * g) * conditional_pdf(g, m, alpha_s); }, 0.0, g_hi(m), 1e-12);
    }
    double component(double l, double m) const {
        if (l >= m + alpha_s) return 0.0;
        return bisect_log([&](double p) { return rate_integral(p, m) - l; }, 1e-12, 1.0 / l, 60);
    }
    double expected_rate(double p, double m) const {
        return gk([&](double g) { return std::log1p(p * g) * conditional_pdf(g, m, alpha_s); }, 0.0, g_hi(m), 1e-11);
    }
};

} // namespace oracle

#endif
