#include <benchmark/benchmark.h>

#include <numbers>

#include "decouple/experiments.hpp"

using namespace decouple;

namespace {

OpenSystem system(const ControlParams& control, int s) {
  ReservoirSpec r;
  r.eta = 1.0 / 16.0;
  r.s = s;
  r.omega_c = 2.0 * std::numbers::pi;
  return {control, {r}, ThermalParams::from_physical(0.25, 1e-10, 2.0 * std::numbers::pi)};
}

}  // namespace

static void BM_DecoherenceTable(benchmark::State& state) {
  const OpenSystem sys = system(ControlParams::dephasing(25), 3);
  for (auto _ : state) benchmark::DoNotOptimize(build_decoherence_table(sys, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DecoherenceTable)->Arg(4000)->Arg(8000)->Unit(benchmark::kMillisecond);

static void BM_Evolve(benchmark::State& state) {
  const GeneratorTable table(build_decoherence_table(system(ControlParams::bare(), 1), 8000));
  const QubitState rho0 = density_from_bloch(std::numbers::pi / 2, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(rho0, table));
}
BENCHMARK(BM_Evolve)->Unit(benchmark::kMillisecond);

static void BM_BlochSweep(benchmark::State& state) {
  const OpenSystem sys = system(ControlParams::dephasing(25), 3);
  IntegratorConfig cfg = IntegratorConfig::defaults(sys.control);
  cfg.check_convergence = false;
  DecoherenceCache cache;
  cache.assemble(sys, cfg.steps);
  for (auto _ : state) benchmark::DoNotOptimize(bloch_sweep(sys, 25, 50, cfg, cache, 1));
}
BENCHMARK(BM_BlochSweep)->Unit(benchmark::kMillisecond);
