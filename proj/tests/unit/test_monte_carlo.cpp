// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap/capacity.hpp"
#include "crcap/errors.hpp"
#include "crcap/monte_carlo.hpp"
#include "crcap/special_functions.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

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

bool same(const crcap::SimReport& a, const crcap::SimReport& b) {
    if (a.rate.mean != b.rate.mean || a.avg_power.mean != b.avg_power.mean || a.outages != b.outages) return false;
    if (a.bins.size() != b.bins.size()) return false;
    for (std::size_t i = 0; i < a.bins.size(); ++i) {
        if (a.bins[i].outages != b.bins[i].outages || a.bins[i].samples != b.bins[i].samples) return false;
    }
    return true;
}

} // namespace

TEST_CASE("zero power policy", "[mc]") {
    const auto c = scenario(CsiKnowledge::none(), CsiKnowledge::none(), 1.0);
    const auto r = crcap::simulate_policy(crcap::constant_evaluator(0.0), c, 20000, 1);
    CHECK(r.rate.mean == 0.0);
    CHECK(r.avg_power.mean == 0.0);
    CHECK(r.outage.mean == 0.0);
}

TEST_CASE("constant power matches the closed form", "[mc]") {
    const auto c = scenario(CsiKnowledge::none(), CsiKnowledge::none(), 1.0);
    const auto r = crcap::simulate_policy(crcap::constant_evaluator(2.0), c, 400000, 3);
    CHECK_THAT(r.rate.mean, WithinAbs(crcap::exp_scaled_e1(0.5), 3.0 * r.rate.half_width));
    CHECK(r.outage.mean >= 0.0);
    CHECK(r.outage.mean <= 1.0);
}

TEST_CASE("channel sample moments and orthogonality", "[mc]") {
    crcap::RandomStream s(77, 0);
    const int n = 1000000;
    double sg = 0.0, sm = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto d = crcap::sample_channel_pair(0.4, s);
        sg += d.true_power;
        sm += d.estimate_power;
    }
    CHECK_THAT(sg / n, WithinAbs(1.0, 0.005));
    CHECK_THAT(sm / n, WithinAbs(0.6, 0.005));
}

TEST_CASE("reproducible and thread independent", "[mc]") {
    const auto c = scenario(CsiKnowledge::estimated(0.5), CsiKnowledge::estimated(0.5), 1.0);
    const auto eval = crcap::make_evaluator(crcap::solve_lambda(c));
    const auto a = crcap::simulate_policy(eval, c, 50000, 11, 1);
    const auto b = crcap::simulate_policy(eval, c, 50000, 11, 1);
    const auto d = crcap::simulate_policy(eval, c, 50000, 11, 4);
    CHECK(same(a, b));
    CHECK(same(a, d));
    const auto e = crcap::simulate_policy(eval, c, 50000, 12, 1);
    CHECK_FALSE(same(a, e));
}

TEST_CASE("half width halves with four times the samples", "[mc]") {
    const auto c = scenario(CsiKnowledge::perfect(), CsiKnowledge::none(), 1.0);
    const auto eval = crcap::make_evaluator(crcap::solve_lambda(c));
    const auto a = crcap::simulate_policy(eval, c, 100000, 5);
    const auto b = crcap::simulate_policy(eval, c, 400000, 5);
    CHECK_THAT(a.rate.half_width / b.rate.half_width, WithinRel(2.0, 0.2));
}

TEST_CASE("guard against unavailable state", "[mc]") {
    const auto c = scenario(CsiKnowledge::none(), CsiKnowledge::none(), 1.0);
    crcap::PolicyEvaluator cheat = [](const crcap::ObservedState& s) { return s.secondary().power; };
    CHECK_THROWS_AS(crcap::simulate_policy(cheat, c, 10000, 1), crcap::DomainError);
    CHECK_THROWS_AS(crcap::simulate_policy(crcap::constant_evaluator(1.0), c, 10, 1), crcap::DomainError);
}

TEST_CASE("outage counting", "[mc]") {
    CHECK(crcap::is_outage(2.0, 6.0, 10.0));
    CHECK_FALSE(crcap::is_outage(2.0, 5.0, 10.0));
    CHECK_FALSE(crcap::is_outage(0.0, 1e300, 10.0));
}

TEST_CASE("outage verification", "[mc]") {
    const std::uint64_t n = 200000;
    auto c = scenario(CsiKnowledge::perfect(), CsiKnowledge::perfect(), 1.0);
    auto v = crcap::verify_outage(crcap::make_evaluator(crcap::solve_lambda(c)), c, n, 2);
    CHECK(v.pass);
    CHECK(v.report.outages == 0);

    c.cl_csi = CsiKnowledge::estimated(0.5);
    c.p_avg = 10.0;
    v = crcap::verify_outage(crcap::make_evaluator(crcap::solve_lambda(c)), c, n, 2);
    CHECK(v.pass);
    REQUIRE(v.report.bins.size() == 10);
    double worst = 0.0;
    for (const auto& b : v.report.bins) worst = std::max(worst, b.outage.mean);
    CHECK(worst >= 0.04);

    c.cl_csi = CsiKnowledge::none();
    v = crcap::verify_outage(crcap::make_evaluator(crcap::solve_lambda(c)), c, n, 2);
    CHECK(v.pass);

    // A policy that ignores the cap must be caught.
    v = crcap::verify_outage(crcap::constant_evaluator(20.0), c, n, 2);
    CHECK_FALSE(v.pass);
}

TEST_CASE("saturated average power is the mean cap", "[mc]") {
    const auto c = scenario(CsiKnowledge::estimated(0.5), CsiKnowledge::estimated(0.5), 10.0);
    const auto r = crcap::simulate_policy(crcap::make_evaluator(crcap::solve_lambda(c)), c, 200000, 4);
    CHECK_THAT(r.avg_power.mean, WithinAbs(crcap::average_power_threshold(c), 3.0 * r.avg_power.half_width));
    CHECK(r.avg_power.mean <= c.p_avg);
}

TEST_CASE("on-off policy meets the budget", "[mc]") {
    const auto c = scenario(CsiKnowledge::perfect(), CsiKnowledge::none(), 0.5);
    const crcap::OnOffPolicy p(c, crcap::optimize_threshold(c).tau);
    const auto r = crcap::simulate_policy(crcap::make_evaluator(p), c, 200000, 6);
    CHECK(r.avg_power.mean <= c.p_avg + 3.0 * r.avg_power.half_width);
    CHECK(r.outage.mean <= c.epsilon + 3.0 * r.outage.half_width);
}
