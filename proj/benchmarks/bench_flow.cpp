#include <benchmark/benchmark.h>

#include <cmath>

#include "hyprel/flow.hpp"

using namespace hyprel;

static void BM_FlowStep(benchmark::State& state) {
    auto st = make_radial_state(0.0, 1.0, static_cast<int>(state.range(0)), [](double th) {
        return 1.0 + 0.1 * std::sin(th) * std::sin(th);
    });
    const double dt = 0.25 * st.dtheta() * st.dtheta();
    for (auto _ : state) {
        st = step(st, dt);
        benchmark::DoNotOptimize(st.values.data());
    }
}
BENCHMARK(BM_FlowStep)->Arg(100)->Arg(400)->Arg(1600);

static void BM_FlowEntropy(benchmark::State& state) {
    const auto st = make_radial_state(0.0, 1.0, 400, [](double th) {
        return 1.0 + 0.1 * std::sin(th) * std::sin(th);
    });
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow_entropy(st).value);
    }
}
BENCHMARK(BM_FlowEntropy);

static void BM_GraphStep(benchmark::State& state) {
    auto g = make_graph(0.05, 1.0, 512, [](double y) { return 0.05 + 0.4 * y * y; });
    const double dt = 0.25 * g.h;
    for (auto _ : state) {
        g = graph_step(g, dt);
        benchmark::DoNotOptimize(g.u.data());
    }
}
BENCHMARK(BM_GraphStep);

BENCHMARK_MAIN();
