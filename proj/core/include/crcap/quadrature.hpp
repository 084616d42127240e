// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_QUADRATURE_HPP
#define CRCAP_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace crcap {

struct QuadratureOptions {
    double rel_tol = 1e-7;
    double abs_tol = 1e-13;
    int max_panels = 2000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

/// Global adaptive 21-point Gauss-Kronrod integration over the polyline of
/// `points` (sorted; repeated or out-of-order entries are dropped). Each
/// breakpoint starts its own panel, so known kinks in the integrand never
/// sit inside a panel. The panel with the largest error estimate is bisected
/// until the summed estimate meets max(abs_tol, rel_tol * |value|).
template <class F>
QuadratureResult integrate(F&& f, std::span<const double> points, const QuadratureOptions& opt = {}) {
    using rule = boost::math::quadrature::gauss_kronrod<double, 21>;

    struct Panel {
        double a, b, value, error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };

    QuadratureResult out;
    std::priority_queue<Panel> panels;
    auto eval_panel = [&](double a, double b) {
        double err = 0.0;
        const double v = rule::integrate(f, a, b, 0, 0.0, &err);
        out.evaluations += 21;
        // boost leaves the non-adaptive error on the reference interval
        return Panel{a, b, v, err * 0.5 * (b - a)};
    };

    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double a = points[i];
        const double b = points[i + 1];
        if (!(b > a)) continue;
        Panel p = eval_panel(a, b);
        value += p.value;
        error += p.error;
        panels.push(p);
    }

    int count = static_cast<int>(panels.size());
    while (!panels.empty() && error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
        if (count >= opt.max_panels) {
            out.converged = false;
            break;
        }
        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel is at floating-point resolution; nothing more to gain.
            out.converged = false;
            break;
        }
        panels.pop();
        const Panel left = eval_panel(worst.a, mid);
        const Panel right = eval_panel(mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
    }

    // Re-sum from the panels to shed the drift of the running updates.
    value = 0.0;
    error = 0.0;
    while (!panels.empty()) {
        value += panels.top().value;
        error += panels.top().error;
        panels.pop();
    }
    out.value = value;
    out.error = error;
    return out;
}

template <class F>
QuadratureResult integrate(F&& f, std::initializer_list<double> points, const QuadratureOptions& opt = {}) {
    std::vector<double> pts(points);
    return integrate(std::forward<F>(f), std::span<const double>(pts), opt);
}

/// Sorted copy of `points` clipped to [lo, hi], with lo and hi included.
inline std::vector<double> breakpoints(double lo, double hi, std::initializer_list<double> interior = {}) {
    std::vector<double> pts{lo};
    for (double x : interior) {
        if (std::isfinite(x) && x > lo && x < hi) pts.push_back(x);
    }
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace crcap

#endif
