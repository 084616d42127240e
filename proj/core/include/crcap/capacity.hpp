// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_CAPACITY_HPP
#define CRCAP_CAPACITY_HPP

#include "crcap/power_allocation.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace crcap {

/// Capacities are in nats per channel use.
struct CapacityResult {
    double capacity = 0.0;
    double lambda = 0.0;
    /// +inf when the cap has an infinite mean (perfect cross-link CSI).
    double p_avg_star = 0.0;
    Regime regime = Regime::power_limited;
    double quadrature_error_estimate = 0.0;
    /// E[P] of the solved policy.
    double expected_power = 0.0;
};

CapacityResult ergodic_capacity(const ScenarioConfig& config);

/// Rate of an already built policy (for example one with a perturbed multiplier).
CapacityResult policy_rate(const PowerPolicy& policy);

/// Low-SNR limit: depends on the secondary CSI only, the interference cap is dropped.
double low_snr_asymptote(const ScenarioConfig& config);

/// High-SNR limit: the saturated capacity, which depends on the cross-link CSI only.
double high_snr_asymptote(const ScenarioConfig& config);

/// Water-filling multiplier for Rayleigh fading: solves E[1/l - 1/g]^+ = p_avg,
/// i.e. e^-l / l - E1(l) = p_avg.
double water_filling_cutoff(double p_avg);

enum class SweepAxis { p_avg, alpha_s, alpha_p, i_peak, epsilon };

const char* to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& name);

/// Copy of `config` with one parameter replaced. Error-variance axes build
/// estimated CSI and so reject 0 and 1.
ScenarioConfig with_axis(const ScenarioConfig& config, SweepAxis axis, double value);

enum class PointFailure { none, domain, numerical };

struct SweepPoint {
    double value = 0.0;
    std::optional<CapacityResult> result;
    PointFailure failure = PointFailure::none;
    std::string error;
};

/// One independent capacity solve per grid value, on `threads` workers
/// (0: all cores). Results come back in grid order; a failing point is
/// recorded and the sweep continues.
std::vector<SweepPoint> capacity_sweep(const ScenarioConfig& config, SweepAxis axis, std::span<const double> grid,
                                       unsigned threads = 0);

} // namespace crcap

#endif
