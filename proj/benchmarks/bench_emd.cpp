#include "oracles.hpp"

#include "scdepth/wasserstein.hpp"

#include <benchmark/benchmark.h>

using namespace scdepth;

static void BM_WassersteinUniform(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    Rng rng(11);
    const auto a = DiscreteDistribution::uniform(oracle::random_profiles(k, 50, rng, 0.5));
    const auto b = DiscreteDistribution::uniform(oracle::random_profiles(k, 50, rng, 0.5));
    for (auto _ : state) {
        benchmark::DoNotOptimize(wasserstein_p(a, b, 1.0, 2.0));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WassersteinUniform)->RangeMultiplier(2)->Range(16, 512)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_WassersteinWeighted(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    Rng rng(12);
    std::vector<double> wa(k), wb(k);
    for (std::size_t i = 0; i < k; ++i) {
        wa[i] = 1.0 + static_cast<double>(i % 3);
        wb[i] = 1.0 + static_cast<double>(i % 5);
    }
    const DiscreteDistribution a(oracle::random_profiles(k, 50, rng, 0.5), wa);
    const DiscreteDistribution b(oracle::random_profiles(k, 50, rng, 0.5), wb);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wasserstein_p(a, b, 2.0, 2.0));
    }
}
BENCHMARK(BM_WassersteinWeighted)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

static void BM_CostMatrix(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    Rng rng(13);
    const auto a = DiscreteDistribution::uniform(oracle::random_profiles(k, 200, rng, 0.8));
    const auto b = DiscreteDistribution::uniform(oracle::random_profiles(k, 200, rng, 0.8));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cost_matrix(a, b, 1.0, 2.0));
    }
}
BENCHMARK(BM_CostMatrix)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
