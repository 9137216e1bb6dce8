#include <benchmark/benchmark.h>

#include "mlrr/engine.hpp"
#include "mlrr/models.hpp"
#include "mlrr/plan.hpp"
#include "mlrr/refiners.hpp"
#include "mlrr/rng.hpp"
#include "mlrr/weights.hpp"

namespace {

using namespace mlrr;

StructuralParams call_params() {
  StructuralParams p;
  p.alpha = 1.0;
  p.beta = 1.0;
  p.V1 = 56.0;
  p.var_Y0 = 876.0;
  return p;
}

void BM_PhiloxBlock(benchmark::State& state) {
  std::array<std::uint32_t, 4> ctr = {0, 0, 0, 0};
  const std::array<std::uint32_t, 2> key = {0xdeadbeefu, 0x12345678u};
  for (auto _ : state) {
    ctr = Philox4x32::block(ctr, key);
    benchmark::DoNotOptimize(ctr);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxBlock);

void BM_NormalDraw(benchmark::State& state) {
  RngStream g(42, 0, 0, 0);
  double acc = 0.0;
  for (auto _ : state) acc += g.normal();
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NormalDraw);

void BM_WeightsSolve(benchmark::State& state) {
  const int R = static_cast<int>(state.range(0));
  const auto n = refiners(RefinerScheme::geometric(2, R));
  for (auto _ : state) {
    const auto w = solve_weights(1.0, n);
    benchmark::DoNotOptimize(w.w.data());
  }
}
BENCHMARK(BM_WeightsSolve)->Arg(2)->Arg(4)->Arg(8);

void BM_GbmPairDraw(benchmark::State& state) {
  const auto s = gbm_euler_sampler({100.0, 0.06, 0.4, 1.0}, Payoff::call(80.0));
  const std::int64_t n_coarse = state.range(0);
  std::uint64_t k = 0;
  double acc = 0.0;
  for (auto _ : state) {
    RngStream g(7, 0, 1, k++);
    const auto [yc, yf] = s->sample_pair(1.0, n_coarse, 4 * n_coarse, g);
    acc += yf - yc;
  }
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GbmPairDraw)->Arg(1)->Arg(4)->Arg(16);

void BM_PlanPipeline(benchmark::State& state) {
  const StructuralParams p = call_params();
  const double eps = 1.0 / static_cast<double>(1 << state.range(0));
  for (auto _ : state) {
    const Plan plan = make_plan(EstimatorKind::ml2r, eps, p);
    benchmark::DoNotOptimize(plan.predicted_cost);
  }
}
BENCHMARK(BM_PlanPipeline)->Arg(3)->Arg(5)->Arg(8);

void BM_SmallRun(benchmark::State& state) {
  SyntheticParams sp;
  sp.coeffs = {0.1, 0.05};
  sp.V1 = 1.0;
  const auto sampler = synthetic_sampler(sp);
  StructuralParams p;
  p.V1 = 1.0;
  PlanOverrides ov;
  ov.N = 4096;
  const Plan plan =
      make_plan(EstimatorKind::ml2r, 0.125, p, CostRegime::sum, Rounding::ceil, ov);
  std::uint64_t seed = 1;
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const RunResult res = run(plan, *sampler, seed++, threads);
    benchmark::DoNotOptimize(res.estimate);
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_SmallRun)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
