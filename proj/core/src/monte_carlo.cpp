// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap/monte_carlo.hpp"

#include "crcap/errors.hpp"
#include "crcap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crcap {

namespace {

constexpr double z95 = 1.959963984540054;
constexpr std::size_t n_bins = 10;

struct Sums {
    double rate = 0.0, rate2 = 0.0;
    double power = 0.0, power2 = 0.0;
    std::uint64_t outages = 0;
    std::vector<std::uint64_t> bin_samples;
    std::vector<std::uint64_t> bin_outages;

    explicit Sums(std::size_t bins) : bin_samples(bins, 0), bin_outages(bins, 0) {}

    void merge(const Sums& o) {
        rate += o.rate;
        rate2 += o.rate2;
        power += o.power;
        power2 += o.power2;
        outages += o.outages;
        for (std::size_t i = 0; i < bin_samples.size(); ++i) {
            bin_samples[i] += o.bin_samples[i];
            bin_outages[i] += o.bin_outages[i];
        }
    }
};

Estimate mean_estimate(double sum, double sum2, std::uint64_t n) {
    if (n == 0) return {};
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double var = n > 1 ? std::max(0.0, (sum2 - nn * mean * mean) / (nn - 1.0)) : 0.0;
    return {mean, z95 * std::sqrt(var / nn)};
}

Estimate proportion(std::uint64_t k, std::uint64_t n) {
    if (n == 0) return {};
    const double p = static_cast<double>(k) / static_cast<double>(n);
    return {p, z95 * std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

// Bin edges over the cross-link observation: deciles of its law.
std::vector<double> bin_edges(const ScenarioConfig& config) {
    const double inf = std::numeric_limits<double>::infinity();
    if (config.cl_csi.is_none()) return {0.0, inf};
    const double alpha = config.cl_csi.is_estimated() ? config.cl_csi.alpha() : 0.0;
    std::vector<double> edges{0.0};
    for (std::size_t k = 1; k < n_bins; ++k) {
        edges.push_back(config.fading->estimate_quantile(static_cast<double>(k) / n_bins, alpha));
    }
    edges.push_back(inf);
    return edges;
}

} // namespace

ObservedState::ObservedState(const ScenarioConfig& config, ChannelDraw sl, ChannelDraw cl)
    : config_(&config), sl_(sl), cl_(cl) {}

SecondaryLinkState ObservedState::secondary() const {
    if (config_->sl_csi.is_none()) {
        throw DomainError("policy read the secondary-link state, which the transmitter does not know");
    }
    return {sl_.estimate_power};
}

CrossLinkState ObservedState::cross() const {
    if (config_->cl_csi.is_none()) {
        throw DomainError("policy read the cross-link state, which the transmitter does not know");
    }
    return {cl_.estimate_power};
}

SecondaryLinkState ObservedState::secondary_or_empty() const {
    return config_->sl_csi.is_none() ? SecondaryLinkState{} : secondary();
}

CrossLinkState ObservedState::cross_or_empty() const {
    return config_->cl_csi.is_none() ? CrossLinkState{} : cross();
}

PolicyEvaluator make_evaluator(const PowerPolicy& policy) {
    return [policy](const ObservedState& s) { return policy(s.secondary_or_empty(), s.cross_or_empty()); };
}

PolicyEvaluator make_evaluator(const OnOffPolicy& policy) {
    return [policy](const ObservedState& s) { return policy(s.secondary(), s.cross_or_empty()); };
}

PolicyEvaluator constant_evaluator(double power) {
    if (!(power >= 0.0)) detail::throw_domain("constant_evaluator", "power must be nonnegative");
    return [power](const ObservedState&) { return power; };
}

bool is_outage(double power, double cross_gain, double i_peak) {
    return power * cross_gain > i_peak * (1.0 + 1e-12);
}

SimReport simulate_policy(const PolicyEvaluator& policy, const ScenarioConfig& config, std::uint64_t n_samples,
                          std::uint64_t seed, unsigned threads) {
    config.validate();
    if (n_samples < 1000) detail::throw_domain("simulate_policy", "n_samples must be at least 1000");
    if (!policy) detail::throw_domain("simulate_policy", "policy evaluator is empty");

    const std::vector<double> edges = bin_edges(config);
    const std::size_t bins = edges.size() - 1;
    const double alpha_s = config.sl_csi.alpha();
    const double alpha_p = config.cl_csi.alpha();
    const FadingModel& fading = *config.fading;

    const std::uint64_t chunks = (n_samples + monte_carlo_chunk - 1) / monte_carlo_chunk;
    std::vector<Sums> partial(chunks, Sums(bins));
    parallel_for(chunks, threads, [&](std::size_t c) {
        Sums& s = partial[c];
        const std::uint64_t begin = c * monte_carlo_chunk;
        const std::uint64_t end = std::min(n_samples, begin + monte_carlo_chunk);
        for (std::uint64_t i = begin; i < end; ++i) {
            RandomStream rng(seed, i);
            const ChannelDraw sl = fading.sample(alpha_s, rng);
            const ChannelDraw cl = fading.sample(alpha_p, rng);
            const double p = policy(ObservedState(config, sl, cl));
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw NumericalError("simulate_policy: policy returned an invalid power");
            }
            const double r = std::log1p(p * sl.true_power);
            s.rate += r;
            s.rate2 += r * r;
            s.power += p;
            s.power2 += p * p;
            const bool out = is_outage(p, cl.true_power, config.i_peak);
            const std::size_t b = static_cast<std::size_t>(
                std::upper_bound(edges.begin() + 1, edges.end() - 1, cl.estimate_power) - (edges.begin() + 1));
            s.bin_samples[b] += 1;
            if (out) {
                s.outages += 1;
                s.bin_outages[b] += 1;
            }
        }
    });

    Sums total(bins);
    for (const Sums& s : partial) total.merge(s);

    SimReport rep;
    rep.n_samples = n_samples;
    rep.seed = seed;
    rep.rate = mean_estimate(total.rate, total.rate2, n_samples);
    rep.avg_power = mean_estimate(total.power, total.power2, n_samples);
    rep.outages = total.outages;
    rep.outage = proportion(total.outages, n_samples);
    for (std::size_t b = 0; b < bins; ++b) {
        OutageBin bin;
        bin.lo = edges[b];
        bin.hi = edges[b + 1];
        bin.samples = total.bin_samples[b];
        bin.outages = total.bin_outages[b];
        bin.outage = proportion(bin.outages, bin.samples);
        rep.bins.push_back(bin);
    }
    return rep;
}

OutageVerdict verify_outage(const PolicyEvaluator& policy, const ScenarioConfig& config, std::uint64_t n_samples,
                            std::uint64_t seed, unsigned threads) {
    OutageVerdict v;
    v.report = simulate_policy(policy, config, n_samples, seed, threads);
    const double eps = config.epsilon;
    auto sigma = [&](std::uint64_t n) { return n ? std::sqrt(eps * (1.0 - eps) / static_cast<double>(n)) : 0.0; };

    switch (config.cl_csi.level()) {
    case CsiLevel::perfect:
        v.checks.push_back({"outage_count", 0.0, static_cast<double>(v.report.outages), 0.0, v.report.outages == 0});
        break;
    case CsiLevel::none: {
        const double tol = 3.0 * sigma(v.report.n_samples);
        v.checks.push_back({"outage_fraction", eps, v.report.outage.mean, tol, v.report.outage.mean <= eps + tol});
        break;
    }
    case CsiLevel::estimated:
        for (std::size_t b = 0; b < v.report.bins.size(); ++b) {
            const OutageBin& bin = v.report.bins[b];
            const double tol = 3.0 * sigma(bin.samples);
            v.checks.push_back({"outage_bin_" + std::to_string(b), eps, bin.outage.mean, tol,
                                bin.outage.mean <= eps + tol});
        }
        break;
    }
    for (const OutageCheck& c : v.checks) v.pass = v.pass && c.pass;
    return v;
}

} // namespace crcap
