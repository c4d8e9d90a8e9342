#include <benchmark/benchmark.h>

#include <numbers>

#include "ecs/loss_channel.hpp"
#include "ecs/sweep.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

ecs::CoherentDyadSum bench_state(double alpha, double eta) {
  ecs::PipelineOptions opt;
  opt.prune_tol = 0.0;  // keep every dyad so the kernel sees the full term count
  return ecs::measured_state(alpha, {{kPi / 2, 0.3}, {1.1, -0.7}}, ecs::Efficiency(eta), opt);
}

void sign_probabilities(benchmark::State& st, ecs::ExecutionPolicy policy) {
  const auto s = bench_state(static_cast<double>(st.range(0)), 0.8);
  for (auto _ : st) benchmark::DoNotOptimize(ecs::sign_probabilities(s, {}, policy));
  st.counters["terms"] = static_cast<double>(s.size());
}

void sweep(benchmark::State& st, ecs::ExecutionPolicy policy) {
  ecs::SweepSpec spec;
  spec.kind = ecs::InequalityKind::L;
  spec.alpha_range = {5.0, 60.0, 5.0};
  spec.phi_range = {0.1, 0.4, 0.05};
  spec.eta_list = {1.0, 0.6};
  for (auto _ : st) benchmark::DoNotOptimize(ecs::run_sweep(spec, policy));
  st.counters["rows"] = 12 * 7 * 2;
}

}  // namespace

BENCHMARK_CAPTURE(sign_probabilities, serial, ecs::ExecutionPolicy::Serial)->Arg(2)->Arg(60)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(sign_probabilities, parallel, ecs::ExecutionPolicy::Parallel)->Arg(2)->Arg(60)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(sweep, serial, ecs::ExecutionPolicy::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, parallel, ecs::ExecutionPolicy::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
