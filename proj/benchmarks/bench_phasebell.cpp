#include <benchmark/benchmark.h>

#include "phasebell/bell.hpp"
#include "phasebell/fock_oracle.hpp"
#include "phasebell/optimize.hpp"

using namespace phasebell;

namespace {

const bell::MeasurementSettings kSettings{{0.1, 0.3}, {-0.2, 0.05}, {0.0, -0.4}, {0.25, 0.1}, {0.3, -0.1}, {-0.05, 0.2}};

StateSpec family(int i) {
  switch (i) {
    case 0: return StateSpec::single_photon_w(1.0);
    case 1: return StateSpec::squeezed_vacuum3(0.6);
    default: return StateSpec::ghz_ecs(1.0);
  }
}

void BM_W3(benchmark::State& state) {
  const auto st = family(static_cast<int>(state.range(0)));
  const PhasePoint3 p{{0.1, 0.2}, {-0.3, 0.1}, {0.2, -0.2}};
  for (auto _ : state) benchmark::DoNotOptimize(states::w3(st, p, SParameter(-0.5)));
}
BENCHMARK(BM_W3)->DenseRange(0, 2);

void BM_Evaluate(benchmark::State& state) {
  const bell::BellEvaluator ev(family(static_cast<int>(state.range(0))), SParameter(-0.5));
  for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate(kSettings));
}
BENCHMARK(BM_Evaluate)->DenseRange(0, 2);

void BM_FockCorrelator(benchmark::State& state) {
  const auto rho = fock::build_state(StateSpec::ghz_ecs(1.0));
  const fock::FockCutoff cut(rho.dim() - 1);
  const SParameter s(-0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(fock::correlator(rho, fock::o_operator(kSettings.alpha, s, cut),
                                              fock::o_operator(kSettings.beta, s, cut),
                                              fock::o_operator(kSettings.gamma, s, cut)));
}
BENCHMARK(BM_FockCorrelator)->Unit(benchmark::kMillisecond);

void BM_MaximizeSvetlichny(benchmark::State& state) {
  optimize::OptimizerConfig cfg;
  cfg.multistart_count = 4;
  const auto st = StateSpec::ghz_ecs(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(optimize::maximize_svetlichny(st, SParameter(0.0), cfg));
}
BENCHMARK(BM_MaximizeSvetlichny)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
