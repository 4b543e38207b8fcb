#include <benchmark/benchmark.h>

#include <birkhoff/cell_grid.hpp>

using namespace birkhoff;

static void BM_ConleyPendulum(benchmark::State& state) {
  const CESMap m = make_damped_pendulum(1.0);
  const int n = static_cast<int>(state.range(0));
  const CellGrid g(n, n, m.trapping_band);
  for (auto _ : state) benchmark::DoNotOptimize(conley_attractor(m, g, 400));
}
BENCHMARK(BM_ConleyPendulum)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_BirkhoffFromB0(benchmark::State& state) {
  const CESMap m = make_dissipative_standard(0.5, 0.9, cosine_potential());
  const CellGrid g(256, 256, m.trapping_band);
  const CellSet b0 = conley_attractor(m, g, 200);
  for (auto _ : state) benchmark::DoNotOptimize(birkhoff_attractor(m, b0));
}
BENCHMARK(BM_BirkhoffFromB0)->Unit(benchmark::kMillisecond);
