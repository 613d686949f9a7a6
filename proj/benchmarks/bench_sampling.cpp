#include "oracles.hpp"

#include "scdepth/sequencing.hpp"

#include <benchmark/benchmark.h>

using namespace scdepth;

static void BM_MultinomialEstimate(benchmark::State& state) {
    Rng rng(21);
    const auto q = oracle::random_profile(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(multinomial_estimate(1000, q, rng));
    }
}
BENCHMARK(BM_MultinomialEstimate)->Arg(100)->Arg(2000)->Arg(20000);

static void BM_ShallowSequence(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto m = static_cast<std::uint64_t>(state.range(1));
    Rng rng(22);
    const auto mu = DiscreteDistribution::uniform(oracle::random_profiles(500, 2000, rng, 0.7));
    std::uint64_t r = 0;
    for (auto _ : state) {
        Rng stream = rng.derive(r++);
        const auto sample = sample_cells(mu, n, WeightModel::uniform(), stream);
        benchmark::DoNotOptimize(
            shallow_sequence(sample.cells, sample.raw_weights, m, UnseenPolicy::uniform(), stream));
    }
}
BENCHMARK(BM_ShallowSequence)
    ->Args({100, 10000})
    ->Args({1000, 100000})
    ->Args({1000, 1000000})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
