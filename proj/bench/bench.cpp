// Serial reference versus OpenMP fan-out for the grid commands.
//   cslprobe_bench --benchmark_filter=Heatmap

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "cslprobe/budget.hpp"
#include "cslprobe/collapse.hpp"
#include "cslprobe/config.hpp"
#include "cslprobe/sweep.hpp"

using namespace cslprobe;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::Serial : Execution::OpenMP;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    return v;
}

void BM_Heatmap(benchmark::State& state) {
    HeatingMapSpec spec;
    spec.diameters = log_grid(1e-8, 1e-4, 2001);
    spec.temperatures = {0.01, 300.0};
    spec.bounds = default_collapse_bounds();
    for (auto _ : state) benchmark::DoNotOptimize(heating_map(spec, mode(state)));
}

void BM_Exclusion(benchmark::State& state) {
    const auto cfg = parse_config("");
    const Cuboid beam{cfg.geometry.L1, cfg.geometry.L2, cfg.geometry.L3, cfg.geometry.density};
    const auto grid = log_grid(1e-9, 1e-5, 2001);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exclusion_curve(grid, beam, cfg.system.x0(), 5.6e-10, 1.1e-3, mode(state)));
    }
}

void BM_Sweep(benchmark::State& state) {
    const auto base = parse_config("").system.to_params();
    ScenarioOptions o;
    o.check_cutoff = false;
    auto o2 = eta_om2_defaults();
    o2.check_cutoff = false;
    const std::vector<double> grid{0.5, 1.0, 1.5, 2.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            scenario_sweep(base, SweepParam::KappaSExOverKappaP, grid, o, o2, mode(state)));
    }
}

}  // namespace

BENCHMARK(BM_Heatmap)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Exclusion)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
