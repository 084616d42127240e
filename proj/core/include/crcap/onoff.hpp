// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_ONOFF_HPP
#define CRCAP_ONOFF_HPP

#include "crcap/power_allocation.hpp"

namespace crcap {

/// Threshold of the search interval: the 1 - 1e-8 quantile of an Exp(1) gain.
inline constexpr double onoff_tau_max = 18.420680743952367;

/// "On" level min(p_avg / (1 - F(tau)), cap(cl)) with F the Rayleigh power cdf.
double on_level(double tau, CrossLinkState cl, const ScenarioConfig& config);

/// Average rate of transmitting at on_level whenever the secondary power reaches tau.
/// Needs perfect secondary CSI.
double onoff_rate(double tau, const ScenarioConfig& config);

struct ThresholdResult {
    double tau = 0.0;
    double rate = 0.0;
};

/// Coarse 64-point scan of [0, onoff_tau_max], then golden-section search
/// around the best scan point.
ThresholdResult optimize_threshold(const ScenarioConfig& config, unsigned threads = 1);

class OnOffPolicy {
public:
    OnOffPolicy(ScenarioConfig config, double tau);

    /// Power for the observed states; zero below the threshold.
    double operator()(SecondaryLinkState sl, CrossLinkState cl) const;

    double tau() const { return tau_; }
    const ScenarioConfig& config() const { return config_; }

private:
    ScenarioConfig config_;
    InterferenceCapRule cap_;
    double tau_;
};

} // namespace crcap

#endif
