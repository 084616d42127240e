// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap/capacity.hpp"

#include "crcap/errors.hpp"
#include "crcap/parallel.hpp"
#include "crcap/special_functions.hpp"
#include "link_expectation.hpp"
#include "root_finding.hpp"

#include <cmath>
#include <limits>

namespace crcap {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

CapacityResult rate_of(const PowerPolicy& policy) {
    const ScenarioConfig& cfg = policy.config();
    const QuadratureResult r =
        detail::expected_over_links(cfg, policy.secondary_rule(), policy.cap_rule(), detail::Kernel::rate);
    if (!r.converged && r.error > 10.0 * cfg.numerics.quad_rel_tol * std::abs(r.value)) {
        throw NumericalError("ergodic_capacity: nested quadrature did not converge", r.error);
    }
    CapacityResult out;
    out.capacity = r.value;
    out.lambda = policy.regime() == Regime::saturated ? 0.0 : policy.lambda();
    out.p_avg_star = policy.p_avg_star();
    out.regime = policy.regime();
    out.quadrature_error_estimate = r.error;
    out.expected_power = policy.expected_power();
    return out;
}

} // namespace

CapacityResult ergodic_capacity(const ScenarioConfig& config) { return rate_of(solve_lambda(config)); }

CapacityResult policy_rate(const PowerPolicy& policy) { return rate_of(policy); }

double water_filling_cutoff(double p_avg) {
    if (!(p_avg > 0.0) || !std::isfinite(p_avg)) detail::throw_domain("water_filling_cutoff", "p_avg must be positive");
    // h(l) = E[1/l - 1/g]^+ = (e^-l / l - E1(l)) is decreasing; solve ln h(l) = ln p_avg on ln l.
    auto log_h = [](double l) { return -l + std::log(1.0 / l - exp_scaled_e1(l)); };
    auto f = [&](double u) { return log_h(std::exp(u)) - std::log(p_avg); };
    double a = 0.0, fa = f(a);
    double b = a, fb = fa;
    if (fa > 0.0) {
        while (fb > 0.0) {
            b += 1.0;
            fb = f(b);
        }
        a = b - 1.0;
        fa = f(a);
    } else {
        while (fa < 0.0) {
            a -= 4.0;
            if (a < std::log(1e-300)) throw NumericalError("water_filling_cutoff: no bracket");
            fa = f(a);
        }
        b = a + 4.0;
        fb = f(b);
    }
    const detail::RootResult r =
        detail::illinois(f, a, b, fa, fb, [](double, double fx) { return std::abs(fx) <= 1e-13; }, 400);
    return std::exp(r.x);
}

double low_snr_asymptote(const ScenarioConfig& config) {
    config.validate();
    switch (config.sl_csi.level()) {
    case CsiLevel::none: return exp_scaled_e1(1.0 / config.p_avg);
    case CsiLevel::perfect: return exp_integral_e1(water_filling_cutoff(config.p_avg));
    case CsiLevel::estimated: {
        const PowerPolicy policy = detail::solve_with_cap(config, InterferenceCapRule::unconstrained(), inf);
        return rate_of(policy).capacity;
    }
    }
    return 0.0;
}

double high_snr_asymptote(const ScenarioConfig& config) {
    config.validate();
    switch (config.cl_csi.level()) {
    case CsiLevel::none:
        return exp_scaled_e1(1.0 / interference_power_cap({}, config.cl_csi, config.i_peak, config.epsilon,
                                                          *config.fading));
    case CsiLevel::perfect: {
        const double x = config.i_peak;
        const double d = x - 1.0;
        if (std::abs(d) < 1e-8) return 1.0 + 0.5 * d;
        return x * std::log1p(d) / d;
    }
    case CsiLevel::estimated: {
        const QuadratureResult r = detail::expected_over_links(config, SecondaryPowerRule::unlimited(),
                                                               InterferenceCapRule::build(config), detail::Kernel::rate);
        return r.value;
    }
    }
    return 0.0;
}

const char* to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::p_avg: return "p_avg";
    case SweepAxis::alpha_s: return "alpha_s";
    case SweepAxis::alpha_p: return "alpha_p";
    case SweepAxis::i_peak: return "i_peak";
    case SweepAxis::epsilon: return "epsilon";
    }
    return "?";
}

SweepAxis parse_sweep_axis(const std::string& name) {
    for (SweepAxis a : {SweepAxis::p_avg, SweepAxis::alpha_s, SweepAxis::alpha_p, SweepAxis::i_peak,
                        SweepAxis::epsilon}) {
        if (name == to_string(a)) return a;
    }
    detail::throw_domain("parse_sweep_axis", "unknown sweep axis '" + name + "'");
}

ScenarioConfig with_axis(const ScenarioConfig& config, SweepAxis axis, double value) {
    ScenarioConfig c = config;
    switch (axis) {
    case SweepAxis::p_avg: c.p_avg = value; break;
    case SweepAxis::alpha_s: c.sl_csi = CsiKnowledge::estimated(value); break;
    case SweepAxis::alpha_p: c.cl_csi = CsiKnowledge::estimated(value); break;
    case SweepAxis::i_peak: c.i_peak = value; break;
    case SweepAxis::epsilon: c.epsilon = value; break;
    }
    return c;
}

std::vector<SweepPoint> capacity_sweep(const ScenarioConfig& config, SweepAxis axis, std::span<const double> grid,
                                       unsigned threads) {
    std::vector<SweepPoint> points(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        SweepPoint& p = points[i];
        p.value = grid[i];
        try {
            p.result = ergodic_capacity(with_axis(config, axis, grid[i]));
        } catch (const DomainError& e) {
            p.failure = PointFailure::domain;
            p.error = e.what();
        } catch (const std::exception& e) {
            p.failure = PointFailure::numerical;
            p.error = e.what();
        }
    });
    return points;
}

} // namespace crcap
