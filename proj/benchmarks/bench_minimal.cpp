#include <benchmark/benchmark.h>

#include "hyprel/minimal.hpp"

using namespace hyprel;

static void BM_ShootOnce(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(shoot_once(1.0, 0.05).landing_radius);
    }
}
BENCHMARK(BM_ShootOnce);

static void BM_BoundaryTaylor(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(boundary_taylor(1.0, 0.1).rho(1e-3));
    }
}
BENCHMARK(BM_BoundaryTaylor);

static void BM_AlexakisMazzeo(benchmark::State& state) {
    const auto surf = hemisphere_surface(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(alexakis_mazzeo_area(surf));
    }
}
BENCHMARK(BM_AlexakisMazzeo);
