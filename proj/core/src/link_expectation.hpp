// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_SRC_LINK_EXPECTATION_HPP
#define CRCAP_SRC_LINK_EXPECTATION_HPP

#include "crcap/power_allocation.hpp"
#include "crcap/quadrature.hpp"

#include <vector>

namespace crcap::detail {

enum class Kernel { power, rate };

QuadratureOptions quad_options(const NumericSettings& numerics, double tighten = 1.0);

/// Adds scale * 10^j for j = 0, 1, ... that fall strictly inside (lo, hi).
void add_decade_points(std::vector<double>& points, double lo, double hi, double scale);

/// E[ln(1 + P g) | secondary observation] for the configured secondary CSI.
double secondary_rate(double power, SecondaryLinkState state, const ScenarioConfig& config);

/// Nested expectation over the cross-link state (outer) and the secondary
/// observation (middle; the conditional true gain is the innermost integral
/// inside the rate kernel) of either the power min(secondary, cap) or the
/// rate ln(1 + min(secondary, cap) g).
QuadratureResult expected_over_links(const ScenarioConfig& config, const SecondaryPowerRule& secondary,
                                     const InterferenceCapRule& cap, Kernel kernel);

/// The multiplier search of solve_lambda against a given cap and saturation threshold.
PowerPolicy solve_with_cap(const ScenarioConfig& config, InterferenceCapRule cap, double p_star);

} // namespace crcap::detail

#endif
