// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_SRC_ROOT_FINDING_HPP
#define CRCAP_SRC_ROOT_FINDING_HPP

#include <cmath>

namespace crcap::detail {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Root of f on a sign-changing bracket [a, b] by the Illinois variant of
/// regula falsi. The bracket always shrinks; every fourth step is a plain
/// bisection so a stalled endpoint cannot slow it below bisection speed.
/// Stops when done(x, fx) holds or the bracket collapses.
template <class F, class Done>
RootResult illinois(F&& f, double a, double b, double fa, double fb, Done&& done, int max_iter) {
    RootResult r;
    int side = 0;
    for (r.iterations = 1; r.iterations <= max_iter; ++r.iterations) {
        double c = (r.iterations % 4 == 0) ? 0.5 * (a + b) : (a * fb - b * fa) / (fb - fa);
        if (!(c > std::min(a, b) && c < std::max(a, b))) c = 0.5 * (a + b);
        const double fc = f(c);
        r.x = c;
        r.fx = fc;
        if (done(c, fc) || fc == 0.0) {
            r.converged = true;
            return r;
        }
        if ((fc > 0.0) == (fb > 0.0)) {
            b = c;
            fb = fc;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = c;
            fa = fc;
            if (side == +1) fb *= 0.5;
            side = +1;
        }
        if (std::abs(b - a) <= 4.0 * 2.2e-16 * std::max(std::abs(a), std::abs(b))) {
            r.converged = true;
            return r;
        }
    }
    return r;
}

} // namespace crcap::detail

#endif
