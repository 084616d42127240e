// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_SPECIAL_FUNCTIONS_HPP
#define CRCAP_SPECIAL_FUNCTIONS_HPP

namespace crcap {

/// Natural log of the modified Bessel function I0(x), x >= 0.
///
/// Power series below x = 25, asymptotic expansion above; finite for any
/// finite x, so pdfs built on it can be evaluated in log domain.
double bessel_i0_log(double x);

/// Exponential integral E1(x) = int_x^inf e^-t / t dt, x > 0.
double exp_integral_e1(double x);

/// e^x * E1(x), x > 0. Stays finite where e^x alone overflows; this is the
/// closed-form Rayleigh average of ln(1 + P g) written as exp_scaled_e1(1/P).
double exp_scaled_e1(double x);

/// First-order Marcum Q function Q1(a, b) for a, b >= 0, absolute error below 1e-10.
double marcum_q1(double a, double b);

/// 1 - Q1(a, b), summed directly so that small values keep their precision.
double marcum_q1_complement(double a, double b);

} // namespace crcap

#endif
