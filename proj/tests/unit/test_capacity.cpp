// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap/capacity.hpp"
#include "crcap/errors.hpp"
#include "crcap/special_functions.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using crcap::CsiKnowledge;

namespace {

crcap::ScenarioConfig scenario(CsiKnowledge sl, CsiKnowledge cl, double p_avg) {
    crcap::ScenarioConfig c;
    c.sl_csi = sl;
    c.cl_csi = cl;
    c.p_avg = p_avg;
    c.i_peak = 10.0;
    c.epsilon = 0.05;
    return c;
}

const std::vector<CsiKnowledge> csi_levels{CsiKnowledge::none(), CsiKnowledge::perfect(),
                                           CsiKnowledge::estimated(0.5)};

} // namespace

TEST_CASE("capacity vanishes at zero power", "[capacity]") {
    for (const auto& sl : csi_levels) {
        for (const auto& cl : csi_levels) {
            const auto r = crcap::ergodic_capacity(scenario(sl, cl, 1e-6));
            CHECK(r.capacity >= 0.0);
            CHECK(r.capacity < 1e-4);
            CHECK(r.quadrature_error_estimate >= 0.0);
        }
    }
}

TEST_CASE("high-SNR plateaus", "[capacity]") {
    auto c = scenario(CsiKnowledge::perfect(), CsiKnowledge::perfect(), 1e3);
    CHECK_THAT(crcap::high_snr_asymptote(c), WithinRel(10.0 * std::log(10.0) / 9.0, 1e-12));
    c.i_peak = 1.0;
    CHECK_THAT(crcap::high_snr_asymptote(c), WithinRel(1.0, 1e-12));
    c.i_peak = 1.0 + 1e-9;
    CHECK_THAT(crcap::high_snr_asymptote(c), WithinRel(1.0, 1e-8));
    c.i_peak = 10.0;
    c.cl_csi = CsiKnowledge::none();
    // Frozen from mpmath: e^{1/P0} E1(1/P0), P0 = 10 / -ln 0.05.
    CHECK_THAT(crcap::high_snr_asymptote(c), WithinRel(1.223437256288802, 1e-10));
    c.cl_csi = CsiKnowledge::estimated(0.5);
    // Frozen from scipy dblquad over (m_p, g).
    CHECK_THAT(crcap::high_snr_asymptote(c), WithinRel(1.3557700581931593, 1e-7));
}

TEST_CASE("low-SNR limits", "[capacity]") {
    auto c = scenario(CsiKnowledge::none(), CsiKnowledge::perfect(), 0.1);
    CHECK_THAT(crcap::low_snr_asymptote(c), WithinRel(0.09156333393978808, 1e-10));
    const double none = crcap::low_snr_asymptote(c);
    c.sl_csi = CsiKnowledge::estimated(0.999);
    CHECK_THAT(crcap::low_snr_asymptote(c), WithinRel(none, 0.02));
    c.sl_csi = CsiKnowledge::perfect();
    const double lwf = crcap::water_filling_cutoff(0.1);
    CHECK_THAT(std::exp(-lwf) / lwf - crcap::exp_integral_e1(lwf), WithinRel(0.1, 1e-10));
    CHECK_THAT(crcap::low_snr_asymptote(c), WithinRel(crcap::exp_integral_e1(lwf), 1e-12));
}

TEST_CASE("sandwich between asymptotes", "[capacity]") {
    for (const auto& sl : csi_levels) {
        auto c = scenario(sl, CsiKnowledge::estimated(0.5), 0.01);
        // the budget is met to lambda_rel_tol, so capacity may overshoot by as much
        CHECK(crcap::ergodic_capacity(c).capacity <= crcap::low_snr_asymptote(c) * (1.0 + c.numerics.lambda_rel_tol));
    }
    for (const auto& cl : {CsiKnowledge::none(), CsiKnowledge::estimated(0.5)}) {
        auto c = scenario(CsiKnowledge::estimated(0.5), cl, 1.0);
        c.p_avg = 100.0 * crcap::average_power_threshold(c);
        const double hi = crcap::high_snr_asymptote(c);
        CHECK_THAT(crcap::ergodic_capacity(c).capacity, WithinRel(hi, 0.01));
    }
}

TEST_CASE("perfect secondary with estimated cross link matches direct form", "[capacity][oracle]") {
    for (double p : {0.1, 1.0, 10.0}) {
        const oracle::PerfectSlEstimatedCl o{0.5, 10.0, 0.05, p};
        const auto r = crcap::ergodic_capacity(scenario(CsiKnowledge::perfect(), CsiKnowledge::estimated(0.5), p));
        const double l = o.saturated() ? 0.0 : o.lambda();
        CHECK_THAT(r.capacity, WithinRel(o.capacity(l), 2e-4));
        if (!o.saturated()) CHECK_THAT(r.lambda, WithinRel(l, 1e-3));
    }
}

TEST_CASE("estimated secondary with perfect cross link matches direct form", "[capacity][oracle]") {
    const double p = 1.0;
    const oracle::EstimatedSlPerfectCl o{0.5, 10.0, p};
    const auto r = crcap::ergodic_capacity(scenario(CsiKnowledge::estimated(0.5), CsiKnowledge::perfect(), p));
    const double lambda = r.lambda;
    // Per estimate state the cross link is exponential: E_v[min(P, I/v)] and
    // E_v[R(min(P, I/v))] split at v_c = I / P.
    double power = 0.0, rate = 0.0;
    const double m_hi = o.m_hi();
    power = oracle::gk(
        [&](double m) {
            const double pm = o.component(lambda, m);
            if (pm <= 0.0) return 0.0;
            const double vc = o.i_peak / pm;
            return o.f(m) * (pm * -std::expm1(-vc) + o.i_peak * boost::math::expint(1, vc));
        },
        0.0, m_hi, 1e-8);
    rate = oracle::gk(
        [&](double m) {
            const double pm = o.component(lambda, m);
            if (pm <= 0.0) return 0.0;
            const double vc = o.i_peak / pm;
            const double tail = oracle::gk([&](double v) { return std::exp(-v) * o.expected_rate(o.i_peak / v, m); },
                                           vc, vc + 45.0, 1e-8);
            return o.f(m) * (-std::expm1(-vc) * o.expected_rate(pm, m) + tail);
        },
        0.0, m_hi, 1e-8);
    CHECK_THAT(power, WithinRel(p, 2e-4));
    CHECK_THAT(r.capacity, WithinRel(rate, 2e-4));
}

TEST_CASE("saturation along a p_avg sweep", "[capacity]") {
    for (const auto& cl : {CsiKnowledge::none(), CsiKnowledge::estimated(0.5)}) {
        const auto c = scenario(CsiKnowledge::estimated(0.5), cl, 1.0);
        const double star = crcap::average_power_threshold(c);
        std::vector<double> grid;
        for (double f : {1.0, 1.5, 3.0, 10.0, 100.0}) grid.push_back(star * f);
        const auto pts = crcap::capacity_sweep(c, crcap::SweepAxis::p_avg, grid, 1);
        for (const auto& pt : pts) {
            REQUIRE(pt.result);
            CHECK(pt.result->regime == crcap::Regime::saturated);
            CHECK(pt.result->lambda == 0.0);
            CHECK_THAT(pt.result->capacity, WithinAbs(pts.front().result->capacity, 1e-3));
        }
    }
}

TEST_CASE("ordering across knowledge", "[capacity]") {
    for (double p : {0.1, 1.0}) {
        const double cp = crcap::ergodic_capacity(scenario(CsiKnowledge::perfect(), CsiKnowledge::none(), p)).capacity;
        const double ce =
            crcap::ergodic_capacity(scenario(CsiKnowledge::estimated(0.5), CsiKnowledge::none(), p)).capacity;
        const double cn = crcap::ergodic_capacity(scenario(CsiKnowledge::none(), CsiKnowledge::none(), p)).capacity;
        CHECK(cp >= ce);
        CHECK(ce >= cn);
    }
    const double hp = crcap::ergodic_capacity(scenario(CsiKnowledge::estimated(0.5), CsiKnowledge::perfect(), 1e3)).capacity;
    const double he =
        crcap::ergodic_capacity(scenario(CsiKnowledge::estimated(0.5), CsiKnowledge::estimated(0.5), 1e3)).capacity;
    const double hn = crcap::ergodic_capacity(scenario(CsiKnowledge::estimated(0.5), CsiKnowledge::none(), 1e3)).capacity;
    CHECK(hp >= he);
    CHECK(he >= hn);
}

TEST_CASE("capacity nondecreasing in p_avg and i_peak", "[capacity]") {
    auto c = scenario(CsiKnowledge::estimated(0.5), CsiKnowledge::estimated(0.5), 1.0);
    c.numerics.lambda_rel_tol = 1e-8;
    c.numerics.quad_rel_tol = 1e-9;
    std::vector<double> grid;
    for (double db = -20.0; db <= 20.0; db += 4.0) grid.push_back(std::pow(10.0, db / 10.0));
    auto pts = crcap::capacity_sweep(c, crcap::SweepAxis::p_avg, grid, 1);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].result->capacity >= pts[i - 1].result->capacity - 1e-8);
    pts = crcap::capacity_sweep(c, crcap::SweepAxis::i_peak, grid, 1);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].result->capacity >= pts[i - 1].result->capacity - 1e-8);
}

TEST_CASE("sweep records per-point failures", "[capacity]") {
    const auto c = scenario(CsiKnowledge::perfect(), CsiKnowledge::estimated(0.5), 1.0);
    const std::vector<double> grid{0.2, 1.5, 0.5};
    const auto pts = crcap::capacity_sweep(c, crcap::SweepAxis::alpha_p, grid, 1);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].result);
    CHECK_FALSE(pts[1].result);
    CHECK(pts[1].failure == crcap::PointFailure::domain);
    CHECK(pts[2].result);
}

TEST_CASE("sweep is independent of thread count", "[capacity]") {
    const auto c = scenario(CsiKnowledge::estimated(0.5), CsiKnowledge::estimated(0.5), 1.0);
    const std::vector<double> grid{0.1, 0.3, 0.5, 0.7};
    const auto a = crcap::capacity_sweep(c, crcap::SweepAxis::alpha_s, grid, 1);
    const auto b = crcap::capacity_sweep(c, crcap::SweepAxis::alpha_s, grid, 3);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a[i].result->capacity == b[i].result->capacity);
}

TEST_CASE("sweep axis names", "[capacity]") {
    for (auto ax : {crcap::SweepAxis::p_avg, crcap::SweepAxis::alpha_s, crcap::SweepAxis::alpha_p,
                    crcap::SweepAxis::i_peak, crcap::SweepAxis::epsilon}) {
        CHECK(crcap::parse_sweep_axis(crcap::to_string(ax)) == ax);
    }
    CHECK_THROWS_AS(crcap::parse_sweep_axis("snr"), crcap::DomainError);
}
