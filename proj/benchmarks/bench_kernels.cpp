#include <benchmark/benchmark.h>

#include <numbers>

#include "decouple/bath.hpp"
#include "decouple/kernel_table.hpp"

using namespace decouple;

namespace {

ReservoirSpec dephasing(int s) {
  ReservoirSpec r;
  r.eta = 1.0 / 16.0;
  r.s = s;
  r.omega_c = 2.0 * std::numbers::pi;
  return r;
}

const ThermalParams kThermal = ThermalParams::from_physical(0.25, 1e-10, 2.0 * std::numbers::pi);

}  // namespace

static void BM_ThermalSum(benchmark::State& state) {
  const ReservoirSpec r = dephasing(static_cast<int>(state.range(0)));
  double delta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_thermal(delta, r, kThermal));
    delta = delta < 1.0 ? delta + 1e-3 : 0.0;
  }
}
BENCHMARK(BM_ThermalSum)->Arg(1)->Arg(3);

static void BM_KernelTable(benchmark::State& state) {
  const std::vector<ReservoirSpec> rs = {dephasing(3)};
  const KernelGrid grid = kernel_grid(rs, ControlParams::dephasing(25), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_kernel_table(rs, kThermal, grid));
}
BENCHMARK(BM_KernelTable)->Arg(16000)->Unit(benchmark::kMillisecond);
