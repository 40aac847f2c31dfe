// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include "pinlock/climb.hpp"
#include "pinlock/grasp_mc.hpp"
#include "pinlock/mechanics.hpp"

#include <benchmark/benchmark.h>

using namespace pinlock;

namespace {

ContactModel model() {
    ContactModel m;
    m.pressing = GammaParams{3.562228750732277, 0.49789574517353014};
    return m;
}

void BM_TrialTotalsSerial(benchmark::State& state) {
    const auto m = model();
    for (auto _ : state) benchmark::DoNotOptimize(trial_totals_serial(m, state.range(0), 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TrialTotalsParallel(benchmark::State& state) {
    const auto m = model();
    for (auto _ : state) benchmark::DoNotOptimize(trial_totals_parallel(m, state.range(0), 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GaitSweepSerial(benchmark::State& state) {
    const auto m = model();
    GaitConfig g;
    g.incline = deg_to_rad(30.0);
    for (auto _ : state) benchmark::DoNotOptimize(sweep_gait_serial(RobotSpec{}, g, m, 4, 1, state.range(0)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GaitSweepParallel(benchmark::State& state) {
    const auto m = model();
    GaitConfig g;
    g.incline = deg_to_rad(30.0);
    for (auto _ : state) benchmark::DoNotOptimize(sweep_gait_parallel(RobotSpec{}, g, m, 4, 1, state.range(0)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TrialTotalsSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialTotalsParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaitSweepSerial)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaitSweepParallel)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
