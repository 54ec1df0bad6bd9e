#include <benchmark/benchmark.h>

#include "parisian/parisian_control.hpp"
#include "parisian/scale_functions.hpp"
#include "parisian/simulator.hpp"

using namespace parisian;

namespace {

LevyModel m1() { return LevyModel::bounded_variation(1.5, {{1.0, 1.0}}); }
const ControlParams kPositiveSet{0.1, 20.0, 1.4};

void BM_BuildScales(benchmark::State& state) {
  const auto m = m1();
  for (auto _ : state) benchmark::DoNotOptimize(ScaleSet(m, 0.1, 20.0, 1.4));
}
BENCHMARK(BM_BuildScales);

void BM_HpEval(benchmark::State& state) {
  const ParisianProblem pr(m1(), kPositiveSet);
  double b = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pr.h_p(b));
    b = b < 5.0 ? b + 0.01 : 0.0;
  }
}
BENCHMARK(BM_HpEval);

void BM_SolveThreshold(benchmark::State& state) {
  const auto m = m1();
  for (auto _ : state) {
    const ParisianProblem pr(m, kPositiveSet);
    benchmark::DoNotOptimize(pr.solve_b_star());
  }
}
BENCHMARK(BM_SolveThreshold)->Unit(benchmark::kMicrosecond);

void BM_SimulateValue(benchmark::State& state) {
  const auto m = m1();
  SimConfig cfg;
  cfg.n_paths = static_cast<std::size_t>(state.range(0));
  cfg.start_x = 1.0;
  cfg.level_b = 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_value(m, kPositiveSet, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateValue)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
