// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_SRC_CONDITIONAL_RULE_HPP
#define CRCAP_SRC_CONDITIONAL_RULE_HPP

#include "crcap/fading.hpp"

#include <vector>

namespace crcap::detail {

/// Fixed composite Gauss-Kronrod rule for expectations over the law of the
/// true power g given the estimate power m. The density is folded into the
/// weights once, so integrands that only vary with the power P (g / (1 + P g),
/// ln(1 + P g)) cost a weighted sum per evaluation.
///
/// Panels: 8 equal pieces of the truncated support, refined by decades
/// from `min_scale` so integrands with a 1/P scale near zero stay resolved
/// for P up to about 1e-3 / min_scale.
class ConditionalRule {
public:
    ConditionalRule(const FadingModel& fading, double m, double alpha, double tail_mass, double min_scale);

    /// E[g / (1 + P g) | m].
    double rate_integral(double power) const;
    /// E[ln(1 + P g) | m].
    double log_rate(double power) const;
    /// [I^-1(lambda)]^+ against this rule; relative residual at most rel_tol.
    double invert(double lambda, double rel_tol) const;
    std::size_t size() const { return nodes_.size(); }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

} // namespace crcap::detail

#endif
