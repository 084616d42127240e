// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap/capacity.hpp"
#include "crcap/errors.hpp"
#include "crcap/onoff.hpp"
#include "crcap/special_functions.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using crcap::CsiKnowledge;

namespace {

crcap::ScenarioConfig scenario(CsiKnowledge cl, double p_avg) {
    crcap::ScenarioConfig c;
    c.sl_csi = CsiKnowledge::perfect();
    c.cl_csi = cl;
    c.p_avg = p_avg;
    c.i_peak = 10.0;
    c.epsilon = 0.05;
    return c;
}

} // namespace

TEST_CASE("on level", "[onoff]") {
    const auto c = scenario(CsiKnowledge::none(), 1.0);
    CHECK(crcap::on_level(0.0, {}, c) == 1.0);
    CHECK_THAT(crcap::on_level(1.0, {}, c), WithinRel(std::exp(1.0), 1e-15));
    CHECK_THAT(crcap::on_level(5.0, {}, c), WithinRel(10.0 / -std::log(0.05), 1e-15));
    const auto e = scenario(CsiKnowledge::estimated(0.5), 1.0);
    for (double m : {0.0, 1.0, 4.0}) {
        const crcap::CrossLinkState x{m};
        const double cap = crcap::interference_power_cap(x, e.cl_csi, 10.0, 0.05);
        const double p0 = crcap::on_level(2.0, x, e);
        CHECK(p0 >= 0.0);
        CHECK(p0 <= cap);
    }
}

TEST_CASE("on-off rate limits", "[onoff]") {
    const auto c = scenario(CsiKnowledge::none(), 1e-3);
    CHECK_THAT(crcap::onoff_rate(0.0, c), WithinRel(crcap::exp_scaled_e1(1e3), 1e-8));
    CHECK(crcap::onoff_rate(crcap::onoff_tau_max, scenario(CsiKnowledge::perfect(), 1.0)) < 1e-5);
}

TEST_CASE("on-off requires perfect secondary csi", "[onoff]") {
    auto c = scenario(CsiKnowledge::none(), 1.0);
    c.sl_csi = CsiKnowledge::estimated(0.5);
    CHECK_THROWS_AS(crcap::onoff_rate(0.0, c), crcap::DomainError);
}

TEST_CASE("on-off rate never exceeds capacity", "[onoff]") {
    for (const auto& cl : {CsiKnowledge::none(), CsiKnowledge::perfect(), CsiKnowledge::estimated(0.5)}) {
        const auto c = scenario(cl, 1.0);
        const double cap = crcap::ergodic_capacity(c).capacity;
        for (double tau = 0.0; tau < 6.0; tau += 0.4) CHECK(crcap::onoff_rate(tau, c) <= cap * (1.0 + 1e-6));
        const auto best = crcap::optimize_threshold(c);
        CHECK(best.rate >= crcap::onoff_rate(0.0, c));
        CHECK(best.rate <= cap * (1.0 + 1e-6));
    }
}

TEST_CASE("saturated no-csi cross link keeps tau at zero", "[onoff]") {
    const auto c = scenario(CsiKnowledge::none(), 10.0);
    const auto best = crcap::optimize_threshold(c);
    CHECK(best.tau == 0.0);
    CHECK_THAT(best.rate, WithinRel(crcap::exp_scaled_e1(-std::log(0.05) / 10.0), 1e-8));
}

TEST_CASE("high-SNR on-off approaches the plateau", "[onoff]") {
    const auto c = scenario(CsiKnowledge::perfect(), 1e4);
    CHECK_THAT(crcap::optimize_threshold(c).rate, WithinRel(crcap::high_snr_asymptote(c), 0.03));
}

TEST_CASE("optimal on-off rate nondecreasing in p_avg", "[onoff]") {
    for (const auto& cl : {CsiKnowledge::none(), CsiKnowledge::estimated(0.5)}) {
        double prev = 0.0;
        for (double db = -20.0; db <= 20.0; db += 5.0) {
            const double r = crcap::optimize_threshold(scenario(cl, std::pow(10.0, db / 10.0))).rate;
            CHECK(r >= prev - 1e-9);
            prev = r;
        }
    }
}

TEST_CASE("on-off policy object", "[onoff]") {
    const auto c = scenario(CsiKnowledge::perfect(), 1.0);
    const crcap::OnOffPolicy p(c, 0.5);
    CHECK(p(crcap::SecondaryLinkState{0.4}, crcap::CrossLinkState{1.0}) == 0.0);
    CHECK_THAT(p(crcap::SecondaryLinkState{0.6}, crcap::CrossLinkState{1.0}), WithinRel(std::exp(0.5), 1e-15));
    CHECK_THAT(p(crcap::SecondaryLinkState{0.6}, crcap::CrossLinkState{10.0}), WithinRel(1.0, 1e-15));
    CHECK_THROWS_AS(crcap::OnOffPolicy(c, -1.0), crcap::DomainError);
}
