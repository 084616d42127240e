// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#include "crcap/capacity.hpp"
#include "crcap/fading.hpp"
#include "crcap/monte_carlo.hpp"
#include "crcap/onoff.hpp"
#include "crcap/special_functions.hpp"

#include <benchmark/benchmark.h>

namespace {

crcap::ScenarioConfig scenario(crcap::CsiKnowledge sl, crcap::CsiKnowledge cl, double p_avg) {
    crcap::ScenarioConfig c;
    c.sl_csi = sl;
    c.cl_csi = cl;
    c.p_avg = p_avg;
    return c;
}

void BM_BesselI0Log(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(crcap::bessel_i0_log(x));
        x = x < 500.0 ? x * 1.1 : 0.1;
    }
}
BENCHMARK(BM_BesselI0Log);

void BM_MarcumQ1(benchmark::State& state) {
    double a = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(crcap::marcum_q1(a, 2.0));
        a = a < 20.0 ? a + 0.37 : 0.5;
    }
}
BENCHMARK(BM_MarcumQ1);

void BM_ConditionalQuantile(benchmark::State& state) {
    double m = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(crcap::conditional_power_inv_cdf(0.95, m, 0.5));
        m = m < 20.0 ? m + 0.13 : 0.0;
    }
}
BENCHMARK(BM_ConditionalQuantile);

void BM_SolveLambda(benchmark::State& state) {
    const auto c = scenario(crcap::CsiKnowledge::estimated(0.5), crcap::CsiKnowledge::estimated(0.5), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(crcap::solve_lambda(c).lambda());
}
BENCHMARK(BM_SolveLambda)->Unit(benchmark::kMillisecond);

void BM_ErgodicCapacity(benchmark::State& state) {
    const crcap::CsiKnowledge levels[] = {crcap::CsiKnowledge::none(), crcap::CsiKnowledge::perfect(),
                                          crcap::CsiKnowledge::estimated(0.5)};
    const auto c = scenario(levels[state.range(0)], levels[state.range(1)], 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(crcap::ergodic_capacity(c).capacity);
}
BENCHMARK(BM_ErgodicCapacity)->ArgsProduct({{0, 1, 2}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

void BM_OptimizeThreshold(benchmark::State& state) {
    const auto c = scenario(crcap::CsiKnowledge::perfect(), crcap::CsiKnowledge::estimated(0.5), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(crcap::optimize_threshold(c).rate);
}
BENCHMARK(BM_OptimizeThreshold)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
    const auto c = scenario(crcap::CsiKnowledge::estimated(0.5), crcap::CsiKnowledge::estimated(0.5), 1.0);
    const auto eval = crcap::make_evaluator(crcap::solve_lambda(c));
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(crcap::simulate_policy(eval, c, n, 1, 1).rate.mean);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(100000)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
