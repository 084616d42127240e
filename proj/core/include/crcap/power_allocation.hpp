// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_POWER_ALLOCATION_HPP
#define CRCAP_POWER_ALLOCATION_HPP

#include "crcap/chebyshev.hpp"
#include "crcap/fading.hpp"

#include <cstddef>
#include <limits>
#include <memory>

namespace crcap {

struct NumericSettings {
    /// Relative tolerance of every adaptive integral in the nested expectations.
    double quad_rel_tol = 1e-7;
    double quad_abs_tol = 1e-15;
    int quad_max_panels = 4000;
    /// Probability mass left out when an infinite domain is truncated.
    double tail_mass = 1e-12;
    /// Residual of conditional-quantile bisection, in probability.
    double bisection_abs_tol = 1e-12;
    /// Residual |I(P) - lambda| / lambda accepted when inverting the rate integral.
    double inversion_rel_tol = 1e-11;
    /// |E[P] - p_avg| <= lambda_rel_tol * p_avg ends the multiplier search.
    double lambda_rel_tol = 1e-4;
    int lambda_max_iter = 200;
    /// Chebyshev tables for state-dependent components.
    double table_rel_tol = 1e-11;
    std::size_t table_max_nodes = 1025;
    /// Spend the whole budget with a no-CSI secondary link: the constant level c
    /// solves E[min(c, cap)] = p_avg instead of being p_avg itself.
    bool rescale_no_csi_power = false;

    void validate() const;
};

/// One problem instance. Powers and gains are linear with unit noise power.
struct ScenarioConfig {
    CsiKnowledge sl_csi = CsiKnowledge::perfect();
    CsiKnowledge cl_csi = CsiKnowledge::perfect();
    double p_avg = 1.0;
    double i_peak = 10.0;
    double epsilon = 0.05;
    NumericSettings numerics{};
    std::shared_ptr<const FadingModel> fading = rayleigh_fading();

    void validate() const;
};

/// Secondary-link observation: true power g_s (perfect CSI) or estimate power
/// m_s (estimated CSI). Ignored without CSI.
struct SecondaryLinkState {
    double power = 0.0;
};

/// Cross-link observation: true power g_p (perfect CSI) or estimate power
/// m_p (estimated CSI). Ignored without CSI.
struct CrossLinkState {
    double power = 0.0;
};

/// Cross-link powers below this are clamped before dividing into i_peak.
inline constexpr double cross_gain_floor = 1e-300;

/// Smallest multiplier the search will try.
inline constexpr double lambda_floor = 1e-300;

/// Interference-driven power limit: i_peak over the (1 - epsilon) quantile of
/// the cross-link gain given what is known about it.
double interference_power_cap(CrossLinkState state, const CsiKnowledge& cl_csi, double i_peak, double epsilon,
                              const FadingModel& fading = *rayleigh_fading());

/// I(P) = E[g / (1 + P g) | m_s], strictly decreasing in P with I(0) = m_s + alpha_s.
double rate_integral(double power, double m_s, double alpha_s, const NumericSettings& numerics = {},
                     const FadingModel& fading = *rayleigh_fading());

/// [I^-1(lambda)]^+ : zero when lambda >= I(0), else the root of I(P) = lambda.
double invert_rate_integral(double lambda, double m_s, double alpha_s, const NumericSettings& numerics = {},
                            const FadingModel& fading = *rayleigh_fading());

/// Average-power component of the policy for the secondary CSI level.
/// Without CSI it is the constant p_avg; perfect CSI water-fills; estimated
/// CSI inverts the rate integral.
double power_component_avg(SecondaryLinkState state, const CsiKnowledge& sl_csi, double lambda, double p_avg,
                           const NumericSettings& numerics = {}, const FadingModel& fading = *rayleigh_fading());

/// The average-power component bound to one multiplier. Nondecreasing in the
/// secondary state. Estimated CSI is served from a Chebyshev table in
/// sqrt(m - cutoff) that is checked against direct inversion at build time.
class SecondaryPowerRule {
public:
    static SecondaryPowerRule build(const ScenarioConfig& config, double lambda);
    /// Constant level, used without secondary CSI.
    static SecondaryPowerRule constant(double level);
    /// +inf everywhere: the min in the policy always selects the cap.
    static SecondaryPowerRule unlimited();

    double operator()(SecondaryLinkState state) const;

    /// Direct (untabulated) value, for checking the table.
    double exact(SecondaryLinkState state) const;

    double lambda() const { return lambda_; }
    /// States below this get zero power.
    double cutoff() const { return cutoff_; }
    /// Smallest state whose power reaches `level`; +inf if none does.
    double state_reaching(double level) const;
    /// Least upper bound of the power over all states.
    double supremum() const;
    bool is_constant() const { return kind_ == Kind::constant || kind_ == Kind::unlimited; }
    bool is_unlimited() const { return kind_ == Kind::unlimited; }
    std::size_t table_size() const { return table_.size(); }

private:
    enum class Kind { constant, unlimited, water_filling, rate_inverse };

    Kind kind_ = Kind::constant;
    double lambda_ = 0.0;
    double level_ = 0.0;
    double cutoff_ = 0.0;
    double alpha_ = 0.0;
    double table_hi_ = 0.0;
    ChebyshevInterpolant table_;
    NumericSettings numerics_{};
    std::shared_ptr<const FadingModel> fading_;
};

/// The interference cap bound to a scenario. Nonincreasing in the cross-link
/// state. Estimated CSI is served from a Chebyshev table of the conditional
/// quantile in sqrt(m_p).
class InterferenceCapRule {
public:
    static InterferenceCapRule build(const ScenarioConfig& config);
    /// +inf everywhere: no interference constraint.
    static InterferenceCapRule unconstrained();

    double operator()(CrossLinkState state) const;
    double exact(CrossLinkState state) const;

    /// Largest state at which the cap is still >= level (0 if none; +inf if all).
    double state_reaching(double level) const;
    bool is_constant() const { return kind_ == Kind::constant || kind_ == Kind::unconstrained; }
    bool is_unconstrained() const { return kind_ == Kind::unconstrained; }
    const CsiKnowledge& csi() const { return csi_; }

private:
    enum class Kind { constant, unconstrained, inverse_gain, inverse_quantile };

    double quantile(double m) const;

    Kind kind_ = Kind::unconstrained;
    CsiKnowledge csi_ = CsiKnowledge::none();
    double i_peak_ = 0.0;
    double epsilon_ = 0.0;
    double level_ = std::numeric_limits<double>::infinity();
    double table_hi_ = 0.0;
    ChebyshevInterpolant table_;
    std::shared_ptr<const FadingModel> fading_;
};

enum class Regime { power_limited, saturated };

const char* to_string(Regime regime);

/// Optimal policy: min(average-power component, interference cap) while the
/// budget binds, the cap alone once p_avg reaches the saturation threshold.
class PowerPolicy {
public:
    PowerPolicy(ScenarioConfig config, SecondaryPowerRule secondary, InterferenceCapRule cap, Regime regime,
                double p_avg_star, double expected_power);

    double operator()(SecondaryLinkState sl, CrossLinkState cl) const;

    double lambda() const { return secondary_.lambda(); }
    Regime regime() const { return regime_; }
    double p_avg_star() const { return p_avg_star_; }
    /// E[P] of this policy as integrated when it was built.
    double expected_power() const { return expected_power_; }

    const ScenarioConfig& config() const { return config_; }
    const SecondaryPowerRule& secondary_rule() const { return secondary_; }
    const InterferenceCapRule& cap_rule() const { return cap_; }

    /// Same caps, different multiplier. Not optimal unless lambda is the solved one.
    PowerPolicy with_lambda(double lambda) const;

private:
    ScenarioConfig config_;
    SecondaryPowerRule secondary_;
    InterferenceCapRule cap_;
    Regime regime_;
    double p_avg_star_;
    double expected_power_;
};

/// Mean interference cap over the cross-link state; +inf for perfect cross-link
/// CSI under Rayleigh fading, where E[i_peak / g_p] diverges.
double average_power_threshold(const ScenarioConfig& config);

/// E[P] for the policy min(secondary(s), cap(c)).
double expected_power(const ScenarioConfig& config, const SecondaryPowerRule& secondary,
                      const InterferenceCapRule& cap);

/// Builds the optimal policy: decides the regime from the saturation threshold
/// and, when the budget binds, searches the multiplier that spends it.
PowerPolicy solve_lambda(const ScenarioConfig& config);

double optimal_power(const PowerPolicy& policy, SecondaryLinkState sl, CrossLinkState cl);

} // namespace crcap

#endif
