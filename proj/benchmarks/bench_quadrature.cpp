#include <benchmark/benchmark.h>

#include "hyprel/geodesics.hpp"
#include "hyprel/quadrature.hpp"

using namespace hyprel;

static void BM_VolEpsGeodesic(benchmark::State& state) {
    const GeodesicH2 g(0.0, 1.0);
    const auto im = immersion(g);
    const auto r = DefiningFunction::height();
    const double eps = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(vol_eps(im, r, eps, {.tol = 1e-9}).value);
    }
}
BENCHMARK(BM_VolEpsGeodesic)->Arg(1)->Arg(2)->Arg(3);

static void BM_VolEpsScaled(benchmark::State& state) {
    const GeodesicH2 g(0.0, 1.0);
    const auto im = immersion(g);
    const auto r = DefiningFunction::scaled(0.0, 0.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vol_eps(im, r, 1e-2, {.tol = 1e-9}).value);
    }
}
BENCHMARK(BM_VolEpsScaled);

static void BM_NumericEntropy(benchmark::State& state) {
    const auto table = enumerate_pairings({0.0, 1.0, 2.0, 4.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(numeric_relative_entropy(table.configs[0], table.configs[1],
                                                          DefiningFunction::height())
                                     .value);
    }
}
BENCHMARK(BM_NumericEntropy);
