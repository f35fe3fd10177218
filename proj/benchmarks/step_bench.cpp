#include <benchmark/benchmark.h>

#include "cfree/catalog.hpp"
#include "cfree/controller.hpp"
#include "cfree/problems.hpp"

namespace {

const char* const kTableaux[] = {"cf4", "cf32a", "cf43"};

void BM_CfStepRigidBody(benchmark::State& state) {
  const auto tableau = cfree::find_tableau(kTableaux[state.range(0)]);
  const auto plan = cfree::plan_step(tableau);
  const auto body = cfree::rigid_body();
  Eigen::Vector3d y = cfree::random_unit_vector(20140623);
  const cfree::StepOptions options{state.range(1) != 0, tableau.is_pair()};
  for (auto _ : state) {
    const auto step = cfree::cf_step(plan, body.action, body.f, y, 1e-3, std::nullopt, options);
    y = step.y1;
    benchmark::DoNotOptimize(y);
  }
  state.SetLabel(std::string(tableau.name) + (options.use_cache ? "" : " no-reuse"));
}
BENCHMARK(BM_CfStepRigidBody)->ArgsProduct({{0, 1, 2}, {1, 0}});

void BM_CfStepHeavyTop(benchmark::State& state) {
  const auto plan = cfree::plan_step(cfree::find_tableau("cf43"));
  const auto top = cfree::heavy_top();
  auto m = cfree::heavy_top_initial();
  for (auto _ : state) {
    m = cfree::cf_step(plan, top.action, top.f, m, 1e-3, std::nullopt).y1;
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_CfStepHeavyTop);

void BM_AdaptiveVanDerPol(benchmark::State& state) {
  const auto plan = cfree::plan_step(cfree::find_tableau("cf32a"));
  const auto vdp = cfree::van_der_pol();
  cfree::ControllerConfig cfg;
  cfg.atol = cfg.rtol = 1e-6;
  long n_exp = 0;
  for (auto _ : state) {
    const auto traj = cfree::integrate_adaptive(plan, vdp, cfree::van_der_pol_initial(), 0.0, 1.6, cfg);
    n_exp = traj.totals.n_exp;
    benchmark::DoNotOptimize(traj.back());
  }
  state.counters["n_exp"] = static_cast<double>(n_exp);
}
BENCHMARK(BM_AdaptiveVanDerPol)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
