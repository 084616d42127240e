// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_MONTE_CARLO_HPP
#define CRCAP_MONTE_CARLO_HPP

#include "crcap/onoff.hpp"
#include "crcap/power_allocation.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace crcap {

/// What the transmitter observes for one channel use. Reading a link whose
/// CSI level is `none` throws DomainError.
class ObservedState {
public:
    ObservedState(const ScenarioConfig& config, ChannelDraw sl, ChannelDraw cl);

    SecondaryLinkState secondary() const;
    CrossLinkState cross() const;

    /// State to pass on for a link: the observation, or an empty state without CSI.
    SecondaryLinkState secondary_or_empty() const;
    CrossLinkState cross_or_empty() const;

private:
    const ScenarioConfig* config_;
    ChannelDraw sl_;
    ChannelDraw cl_;
};

using PolicyEvaluator = std::function<double(const ObservedState&)>;

PolicyEvaluator make_evaluator(const PowerPolicy& policy);
PolicyEvaluator make_evaluator(const OnOffPolicy& policy);
PolicyEvaluator constant_evaluator(double power);

/// Sample mean with a 95% normal-approximation half-width.
struct Estimate {
    double mean = 0.0;
    double half_width = 0.0;
};

/// Outage among the samples whose cross-link observation falls in [lo, hi).
struct OutageBin {
    double lo = 0.0;
    double hi = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t outages = 0;
    Estimate outage;
};

struct SimReport {
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    Estimate rate;
    Estimate avg_power;
    Estimate outage;
    std::uint64_t outages = 0;
    /// Ten quantile bins of the cross-link observation; one bin without cross-link CSI.
    std::vector<OutageBin> bins;
};

/// Samples processed per work unit. Chunks are merged in index order, so the
/// report does not depend on the thread count.
inline constexpr std::uint64_t monte_carlo_chunk = 8192;

/// Interference outage event: P g_p above i_peak by more than a 1e-12 relative slack.
bool is_outage(double power, double cross_gain, double i_peak);

/// Sample i uses RandomStream(seed, i): one secondary then one cross-link draw.
SimReport simulate_policy(const PolicyEvaluator& policy, const ScenarioConfig& config, std::uint64_t n_samples,
                          std::uint64_t seed, unsigned threads = 0);

struct OutageCheck {
    std::string name;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct OutageVerdict {
    bool pass = true;
    std::vector<OutageCheck> checks;
    SimReport report;
};

/// Perfect cross-link CSI: no outage at all. Estimated: every bin at most
/// epsilon + 3 sigma with sigma = sqrt(epsilon (1 - epsilon) / n_bin). None:
/// the overall fraction at most epsilon + 3 sigma.
OutageVerdict verify_outage(const PolicyEvaluator& policy, const ScenarioConfig& config, std::uint64_t n_samples,
                            std::uint64_t seed, unsigned threads = 0);

} // namespace crcap

#endif
