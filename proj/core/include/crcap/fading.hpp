// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_FADING_HPP
#define CRCAP_FADING_HPP

#include "crcap/rng.hpp"

#include <memory>
#include <string>

namespace crcap {

enum class CsiLevel { none, perfect, estimated };

/// What the secondary transmitter knows about one link.
///
/// Under MMSE estimation h = h_est + h_err with the error variance alpha in
/// (0, 1). The two boundaries are separate levels: alpha = 0 is `perfect`,
/// alpha = 1 is `none`. `estimated()` rejects them.
class CsiKnowledge {
public:
    static CsiKnowledge none() { return CsiKnowledge(CsiLevel::none, 1.0); }
    static CsiKnowledge perfect() { return CsiKnowledge(CsiLevel::perfect, 0.0); }
    static CsiKnowledge estimated(double alpha);

    CsiLevel level() const { return level_; }
    /// Estimation-error variance: 1 for none, 0 for perfect.
    double alpha() const { return alpha_; }

    bool is_none() const { return level_ == CsiLevel::none; }
    bool is_perfect() const { return level_ == CsiLevel::perfect; }
    bool is_estimated() const { return level_ == CsiLevel::estimated; }

    friend bool operator==(const CsiKnowledge&, const CsiKnowledge&) = default;

private:
    CsiKnowledge(CsiLevel level, double alpha) : level_(level), alpha_(alpha) {}

    CsiLevel level_;
    double alpha_;
};

std::string to_string(const CsiKnowledge& csi);

/// One channel realization reduced to powers (the phase never matters).
struct ChannelDraw {
    double estimate_power = 0.0;  ///< m = |h_est|^2
    double true_power = 0.0;      ///< g = |h|^2
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Power-gain distributions of one fading family under the estimation model.
///
/// Channels have unit mean power. The estimate power m has mean 1 - alpha and
/// the true power conditioned on m has mean m + alpha.
class FadingModel {
public:
    virtual ~FadingModel() = default;

    virtual std::string name() const = 0;

    virtual double marginal_pdf(double gamma) const = 0;
    virtual double marginal_cdf(double gamma) const = 0;
    virtual double marginal_quantile(double p) const = 0;
    /// Quantile at 1 - tail without forming 1 - tail.
    virtual double marginal_upper_quantile(double tail) const = 0;

    virtual double estimate_pdf(double delta, double alpha) const = 0;
    virtual double estimate_cdf(double delta, double alpha) const = 0;
    virtual double estimate_quantile(double p, double alpha) const = 0;

    virtual double conditional_pdf(double gamma, double m, double alpha) const = 0;
    virtual double conditional_cdf(double gamma, double m, double alpha) const = 0;
    virtual double conditional_inv_cdf(double p, double m, double alpha) const = 0;

    /// Interval holding all but `tail_mass` of the conditional law of g given m.
    virtual Interval conditional_support(double m, double alpha, double tail_mass) const = 0;

    /// Reverse conditional: Prob{m > delta | g = gamma}.
    virtual double estimate_survival_given_gain(double delta, double gamma, double alpha) const = 0;

    /// Draw (m, g) for error variance alpha in [0, 1].
    virtual ChannelDraw sample(double alpha, RandomStream& rng) const = 0;
};

/// Unit-power Rayleigh fading: |h|^2 ~ Exp(1), |h_est|^2 ~ Exp(mean 1 - alpha),
/// and g given m is a scaled noncentral chi-square with two degrees of freedom.
class RayleighFading final : public FadingModel {
public:
    std::string name() const override { return "rayleigh"; }

    double marginal_pdf(double gamma) const override;
    double marginal_cdf(double gamma) const override;
    double marginal_quantile(double p) const override;
    double marginal_upper_quantile(double tail) const override;

    double estimate_pdf(double delta, double alpha) const override;
    double estimate_cdf(double delta, double alpha) const override;
    double estimate_quantile(double p, double alpha) const override;

    double conditional_pdf(double gamma, double m, double alpha) const override;
    double conditional_cdf(double gamma, double m, double alpha) const override;
    double conditional_inv_cdf(double p, double m, double alpha) const override;

    Interval conditional_support(double m, double alpha, double tail_mass) const override;

    /// The estimate given the true gain is CN((1 - alpha) h, alpha (1 - alpha)).
    double estimate_survival_given_gain(double delta, double gamma, double alpha) const override;

    ChannelDraw sample(double alpha, RandomStream& rng) const override;
};

std::shared_ptr<const FadingModel> rayleigh_fading();

// Rayleigh free functions.

double marginal_power_pdf(double gamma);
double estimate_power_pdf(double delta, double alpha);
double conditional_power_pdf(double gamma, double m, double alpha);
double conditional_power_cdf(double gamma, double m, double alpha);
/// Bracketed bisection on the cdf; the bracket starts at [0, m + alpha] and doubles.
double conditional_power_inv_cdf(double p, double m, double alpha);
ChannelDraw sample_channel_pair(double alpha, RandomStream& rng);

} // namespace crcap

#endif
