// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap/errors.hpp"
#include "crcap/fading.hpp"
#include "crcap/quadrature.hpp"
#include "crcap/special_functions.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const crcap::RayleighFading ray;
}

TEST_CASE("csi knowledge", "[fading]") {
    CHECK(crcap::CsiKnowledge::none().alpha() == 1.0);
    CHECK(crcap::CsiKnowledge::perfect().alpha() == 0.0);
    CHECK(crcap::CsiKnowledge::estimated(0.3).alpha() == 0.3);
    CHECK_THROWS_AS(crcap::CsiKnowledge::estimated(0.0), crcap::DomainError);
    CHECK_THROWS_AS(crcap::CsiKnowledge::estimated(1.0), crcap::DomainError);
    CHECK_THROWS_AS(crcap::CsiKnowledge::estimated(-0.2), crcap::DomainError);
}

TEST_CASE("marginal law", "[fading]") {
    auto r = crcap::integrate([](double g) { return ray.marginal_pdf(g); }, {0.0, 1.0, 10.0, 60.0});
    CHECK_THAT(r.value, WithinAbs(1.0, 1e-10));
    double prev = 0.0;
    for (double g = 0.0; g < 30.0; g += 0.1) {
        const double c = ray.marginal_cdf(g);
        CHECK(c >= prev);
        prev = c;
    }
    CHECK_THAT(ray.marginal_cdf(ray.marginal_quantile(0.37)), WithinAbs(0.37, 1e-14));
    CHECK(ray.marginal_upper_quantile(0.05) == -std::log(0.05));
    CHECK_THAT(ray.marginal_upper_quantile(1e-20), WithinRel(20.0 * std::log(10.0), 1e-15));
}

TEST_CASE("estimate law has variance 1 - alpha", "[fading]") {
    for (double a : {0.1, 0.5, 0.9}) {
        auto mass = crcap::integrate([&](double d) { return ray.estimate_pdf(d, a); }, {0.0, 1.0, 10.0, 60.0});
        auto mean = crcap::integrate([&](double d) { return d * ray.estimate_pdf(d, a); }, {0.0, 1.0, 10.0, 60.0});
        CHECK_THAT(mass.value, WithinAbs(1.0, 1e-10));
        CHECK_THAT(mean.value, WithinAbs(1.0 - a, 1e-10));
        CHECK_THAT(ray.estimate_cdf(ray.estimate_quantile(0.8, a), a), WithinAbs(0.8, 1e-13));
    }
}

TEST_CASE("conditional pdf normalisation and mean", "[fading]") {
    for (double a : {0.05, 0.2, 0.5, 0.8}) {
        for (double m : {0.0, 0.01, 0.5, 2.0, 10.0, 40.0}) {
            const auto sup = ray.conditional_support(m, a, 1e-16);
            const auto pts = crcap::breakpoints(sup.lo, sup.hi, {m, m + a, m + 5.0 * a});
            const crcap::QuadratureOptions opt{1e-12, 0.0, 4000};
            auto mass = crcap::integrate([&](double g) { return ray.conditional_pdf(g, m, a); }, std::span(pts), opt);
            auto mean = crcap::integrate([&](double g) { return g * ray.conditional_pdf(g, m, a); }, std::span(pts), opt);
            CHECK_THAT(mass.value, WithinAbs(1.0, 1e-6));
            CHECK_THAT(mean.value, WithinAbs(m + a, 1e-6));
        }
    }
}

TEST_CASE("conditional pdf matches noncentral chi-square", "[fading]") {
    for (double a : {0.1, 0.5}) {
        for (double m : {0.0, 0.3, 3.0}) {
            for (double g : {0.01, 0.4, 1.0, 4.0}) {
                CHECK_THAT(ray.conditional_pdf(g, m, a), WithinRel(oracle::conditional_pdf(g, m, a), 1e-9));
            }
        }
    }
}

TEST_CASE("conditional inverse cdf roundtrip", "[fading]") {
    for (double a : {0.05, 0.5, 0.95}) {
        for (double m : {0.0, 0.2, 1.0, 8.0, 50.0}) {
            for (double p : {1e-6, 0.01, 0.3, 0.5, 0.95, 0.999999}) {
                const double g = ray.conditional_inv_cdf(p, m, a);
                CHECK_THAT(ray.conditional_cdf(g, m, a), WithinAbs(p, 1e-8));
                CHECK_THAT(g, WithinRel(oracle::conditional_quantile(p, m, a), 1e-7));
            }
        }
    }
}

TEST_CASE("conditional cdf agrees with marcum q", "[fading]") {
    const double a = 0.4, m = 1.3, g = 2.2;
    const double ref = 1.0 - crcap::marcum_q1(std::sqrt(2.0 * m / a), std::sqrt(2.0 * g / a));
    CHECK_THAT(ray.conditional_cdf(g, m, a), WithinAbs(ref, 1e-12));
}

TEST_CASE("reverse conditional survival", "[fading]") {
    // P(m > d | g) checked against direct Bayes integration.
    const double a = 0.5;
    for (double g : {0.0, 0.3, 2.0}) {
        for (double d : {0.1, 0.8, 3.0}) {
            const double num = oracle::gk(
                [&](double m) { return ray.estimate_pdf(m, a) * ray.conditional_pdf(g, m, a); }, d, 60.0, 1e-12);
            const double den = ray.marginal_pdf(g);
            CHECK_THAT(ray.estimate_survival_given_gain(d, g, a), WithinRel(num / den, 1e-8));
        }
    }
}

TEST_CASE("sampler reproduces the model moments", "[fading]") {
    const double a = 0.3;
    crcap::RandomStream s(5, 0);
    const int n = 200000;
    double sm = 0.0, sg = 0.0, smg = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto d = ray.sample(a, s);
        REQUIRE(d.estimate_power >= 0.0);
        REQUIRE(d.true_power >= 0.0);
        sm += d.estimate_power;
        sg += d.true_power;
        smg += d.estimate_power * d.true_power;
    }
    CHECK_THAT(sm / n, WithinAbs(1.0 - a, 0.01));
    CHECK_THAT(sg / n, WithinAbs(1.0, 0.01));
    // E[m g] = E[m (m + a)] = 2 (1-a)^2 + a (1-a)
    CHECK_THAT(smg / n, WithinAbs(2.0 * (1 - a) * (1 - a) + a * (1 - a), 0.03));
}

TEST_CASE("domain errors", "[fading]") {
    CHECK_THROWS_AS(ray.conditional_pdf(-1.0, 1.0, 0.5), crcap::DomainError);
    CHECK_THROWS_AS(ray.conditional_inv_cdf(1.5, 1.0, 0.5), crcap::DomainError);
    CHECK_THROWS_AS(ray.conditional_pdf(1.0, -1.0, 0.5), crcap::DomainError);
}
