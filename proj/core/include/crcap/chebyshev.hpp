// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_CHEBYSHEV_HPP
#define CRCAP_CHEBYSHEV_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace crcap {

/// Chebyshev interpolant of a smooth function on [lo, hi].
///
/// Sampled on nested Chebyshev-Lobatto grids (17, 33, 65, ... points) until the
/// trailing coefficients drop below rel_tol times the sampled maximum, so each
/// refinement only evaluates the new odd-indexed nodes.
class ChebyshevInterpolant {
public:
    ChebyshevInterpolant() = default;

    template <class F>
    static ChebyshevInterpolant fit(F&& f, double lo, double hi, double rel_tol, std::size_t max_nodes) {
        ChebyshevInterpolant c;
        c.lo_ = lo;
        c.hi_ = hi;
        std::size_t n = 17;
        std::vector<double> values(n);
        for (std::size_t k = 0; k < n; ++k) values[k] = f(c.node(k, n));
        for (;;) {
            c.coeffs_ = coefficients(values);
            double scale = 0.0;
            for (double v : values) scale = std::max(scale, std::abs(v));
            const std::size_t m = c.coeffs_.size();
            const double tail = std::max({std::abs(c.coeffs_[m - 1]), std::abs(c.coeffs_[m - 2]),
                                          std::abs(c.coeffs_[m - 3])});
            if (tail <= rel_tol * scale || scale == 0.0) {
                c.converged_ = true;
                break;
            }
            const std::size_t n2 = 2 * n - 1;
            if (n2 > max_nodes) break;
            std::vector<double> refined(n2);
            for (std::size_t k = 0; k < n2; ++k) {
                refined[k] = (k % 2 == 0) ? values[k / 2] : f(c.node(k, n2));
            }
            values.swap(refined);
            n = n2;
        }
        c.trim(rel_tol);
        return c;
    }

    double operator()(double x) const {
        const double t = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
        // Clenshaw recurrence.
        double b1 = 0.0, b2 = 0.0;
        for (std::size_t k = coeffs_.size(); k-- > 1;) {
            const double b0 = 2.0 * t * b1 - b2 + coeffs_[k];
            b2 = b1;
            b1 = b0;
        }
        return t * b1 - b2 + coeffs_[0];
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool converged() const { return converged_; }
    std::size_t size() const { return coeffs_.size(); }

private:
    double node(std::size_t k, std::size_t n) const {
        const double t = std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1));
        return 0.5 * (lo_ + hi_) + 0.5 * (hi_ - lo_) * t;
    }

    // DCT-I of samples on the Lobatto grid.
    static std::vector<double> coefficients(const std::vector<double>& v) {
        const std::size_t n = v.size();
        const std::size_t N = n - 1;
        std::vector<double> c(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.5 * (v[0] + ((j % 2 == 0) ? v[N] : -v[N]));
            for (std::size_t k = 1; k < N; ++k) {
                s += v[k] * std::cos(std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(N));
            }
            c[j] = 2.0 * s / static_cast<double>(N);
        }
        c[0] *= 0.5;
        c[N] *= 0.5;
        return c;
    }

    void trim(double rel_tol) {
        double scale = 0.0;
        for (double x : coeffs_) scale = std::max(scale, std::abs(x));
        while (coeffs_.size() > 2 && std::abs(coeffs_.back()) < 1e-3 * rel_tol * scale) coeffs_.pop_back();
    }

    double lo_ = 0.0;
    double hi_ = 1.0;
    bool converged_ = false;
    std::vector<double> coeffs_{0.0};
};

} // namespace crcap

#endif
