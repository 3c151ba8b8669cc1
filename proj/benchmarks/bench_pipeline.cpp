// Timings for the hot paths of a sweep: force distribution, one gait cycle of
// inverse dynamics, a full design evaluation, and a coarse sweep.

#include <benchmark/benchmark.h>

#include <vector>

#include "mvam/config.hpp"
#include "mvam/contact.hpp"

namespace {

mvam::RunConfig load(const char* name) {
  return mvam::load_config(std::string(MVAM_CONFIG_DIR) + "/" + name);
}

void BM_DistributeTwoFeet(benchmark::State& state) {
  const std::vector<mvam::Vec2> feet = {{-0.2, 0.0}, {0.2, 0.0}};
  const mvam::Wrench w{{1.5, 42.0}, 0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvam::distribute_contact_forces(w, feet, {0.0, 0.35}, 0.6));
  }
}
BENCHMARK(BM_DistributeTwoFeet);

void BM_InverseDynamicsCycle(benchmark::State& state) {
  const auto cfg = load("husky_nominal.json");
  const auto body = mvam::enumerate_design_space(cfg.space).front().body;
  const auto plan = mvam::plan_gait(cfg.evaluation.gait, body);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvam::inverse_dynamics_trace(body, plan, cfg.evaluation.dt, cfg.evaluation.mu));
  }
}
BENCHMARK(BM_InverseDynamicsCycle)->Unit(benchmark::kMicrosecond);

void BM_EvaluateDesign(benchmark::State& state) {
  auto cfg = load("husky_nominal.json");
  cfg.evaluation.compute_payload = state.range(0) != 0;
  const auto body = mvam::enumerate_design_space(cfg.space).front().body;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvam::evaluate_body(0, body, cfg.evaluation));
  }
}
BENCHMARK(BM_EvaluateDesign)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CoarseSweep(benchmark::State& state) {
  const auto cfg = load("coarse.json");
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvam::grid_sweep(cfg.space, cfg.evaluation));
  }
}
BENCHMARK(BM_CoarseSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
