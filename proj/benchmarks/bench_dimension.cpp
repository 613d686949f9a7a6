#include "oracles.hpp"

#include "scdepth/dimension.hpp"

#include <benchmark/benchmark.h>

using namespace scdepth;

static void BM_PcaIntrinsicDim(benchmark::State& state) {
    Rng rng(31);
    const auto mu = DiscreteDistribution::uniform(
        oracle::random_profiles(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), rng, 0.6));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pca_intrinsic_dim(mu));
    }
}
BENCHMARK(BM_PcaIntrinsicDim)->Args({500, 200})->Args({200, 3000})->Unit(benchmark::kMillisecond);

static void BM_Nmf(benchmark::State& state) {
    Rng rng(32);
    const Eigen::MatrixXd M = Eigen::MatrixXd::Random(400, 300).cwiseAbs();
    for (auto _ : state) {
        benchmark::DoNotOptimize(nmf(M, static_cast<std::size_t>(state.range(0)), {100, 0.0}, rng));
    }
}
BENCHMARK(BM_Nmf)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
