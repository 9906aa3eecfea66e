#include <benchmark/benchmark.h>

#include <cmath>

#include "oscillab/oscillab.hpp"

using namespace oscillab;

static void BM_ComputeM_Gevrey(benchmark::State& state) {
    PhaseSpec p = PhaseSpec::gevrey(2.0);
    const double lam = std::pow(10.0, static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(compute_m_direct(p, lam));
}
BENCHMARK(BM_ComputeM_Gevrey)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_ComputeM_Power(benchmark::State& state) {
    PhaseSpec p = PhaseSpec::power(1);
    const double lam = std::pow(10.0, static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(compute_m_direct(p, lam));
}
BENCHMARK(BM_ComputeM_Power)->Arg(3)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

static void BM_ComputeM_Substituted(benchmark::State& state) {
    PhaseSpec p = PhaseSpec::log_power(2.0);
    SubstitutionWeight w = matched_weight(p);
    for (auto _ : state) benchmark::DoNotOptimize(compute_m_substituted(w, weight_prefactor(w), 1e4));
}
BENCHMARK(BM_ComputeM_Substituted)->Unit(benchmark::kMillisecond);

static void BM_PlateauExact(benchmark::State& state) {
    PhaseSpec p = PhaseSpec::plateau(2, 1);
    const int n = static_cast<int>(state.range(0));
    OddProductLadder L = build_ladder(2, 1, n);
    for (auto _ : state) benchmark::DoNotOptimize(compute_m_direct(p, L, n));
}
BENCHMARK(BM_PlateauExact)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

static void BM_Ladder(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(build_ladder(2, 1, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Ladder)->Arg(20)->Arg(200);

static void BM_Tail(benchmark::State& state) {
    auto M = CarlemanFamily::refined_gevrey(2, 2.0);
    std::int64_t N = 1;
    for (auto _ : state) benchmark::DoNotOptimize(tail(M, N++ % 5000 + 1));
}
BENCHMARK(BM_Tail);

static void BM_Legendre(benchmark::State& state) {
    auto M = CarlemanFamily::gevrey(2.0);
    const double y = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(legendre(M, y));
}
BENCHMARK(BM_Legendre)->Arg(2)->Arg(10)->Arg(40);

static void BM_Triangle(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(build_triangle(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Triangle)->Arg(20)->Arg(40);

static void BM_ContourDerivative(benchmark::State& state) {
    PhaseSpec p = PhaseSpec::log_power(2.0);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(contour_derivative(p, 0.2, n));
}
BENCHMARK(BM_ContourDerivative)->Arg(4)->Arg(12);

static void BM_BangChain(benchmark::State& state) {
    auto M = CarlemanFamily::gevrey(2.0);
    auto logA = bang_sequence(M, 1.4322, 4000);
    for (auto _ : state) benchmark::DoNotOptimize(bang_chain_oracle(logA, 0.02, 9));
}
BENCHMARK(BM_BangChain)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
