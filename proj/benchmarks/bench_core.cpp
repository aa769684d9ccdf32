#include <benchmark/benchmark.h>

#include <vector>

#include <diffagg/analysis.hpp>
#include <diffagg/macro_solver.hpp>
#include <diffagg/particle.hpp>
#include <diffagg/rng.hpp>
#include <diffagg/sampling.hpp>
#include <diffagg/scenario.hpp>

using namespace diffagg;

// The O(N^2) pairwise drift is the hot loop of every particle run.
static void BM_DriftAll(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const KernelSpec kernel{1.0, 1.5, 1};
    RngStream rng = RngStream::from_seed(7);
    const InitialDensity init = preset_initial("initial1");
    std::vector<double> pos = sample_initial(init, n, rng);
    std::vector<double> out(n);
    for (auto _ : state) {
        drift_all(pos, kernel, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(static_cast<long>(state.iterations()) *
                            static_cast<long>(n) * static_cast<long>(n - 1) / 2);
}
BENCHMARK(BM_DriftAll)->RangeMultiplier(2)->Range(64, 2048);

static void BM_CompositeStep(benchmark::State& state) {
    const std::size_t cells = static_cast<std::size_t>(state.range(0));
    Scenario s;
    s.initial = preset_initial("initial1");
    s.dx = 54.0 / static_cast<double>(cells);
    const Grid g{-27.0, s.dx, cells};
    GridDensity u{g, std::vector<double>(cells), 0.0};
    for (std::size_t i = 0; i < cells; ++i) u.values[i] = s.initial.pdf(g.center(i));
    const MacroConfig cfg{0.17, 1.0, 7.0, 0.9, {}};
    const double dt = cfl_dt(u, cfg.a, cfg.b, 0.9);
    for (auto _ : state) {
        GridDensity v = composite_step(u, cfg, dt);
        benchmark::DoNotOptimize(v.values.data());
    }
    state.SetItemsProcessed(static_cast<long>(state.iterations()) *
                            static_cast<long>(cells));
}
BENCHMARK(BM_CompositeStep)->RangeMultiplier(4)->Range(256, 16384);

static void BM_SampleInitial(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const InitialDensity init = preset_initial("initial2");
    RngStream rng = RngStream::from_seed(11);
    for (auto _ : state) {
        auto xs = sample_initial(init, n, rng);
        benchmark::DoNotOptimize(xs.data());
    }
    state.SetItemsProcessed(static_cast<long>(state.iterations()) *
                            static_cast<long>(n));
}
BENCHMARK(BM_SampleInitial)->Range(1024, 65536);

BENCHMARK_MAIN();
