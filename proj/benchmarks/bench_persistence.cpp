#include <benchmark/benchmark.h>

#include <birkhoff/persistence.hpp>

#include <random>

using namespace birkhoff;

static std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

static void BM_CylinderPersistence(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0)), ny = 32;
  const CubicalGrid g{{nx, ny}, {true, false}};
  const auto v = noise(g.vertex_count());
  for (auto _ : state) benchmark::DoNotOptimize(lower_star_persistence(g, v));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.vertex_count()));
}
BENCHMARK(BM_CylinderPersistence)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_OddCycleBirth(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0)), ny = 32;
  const CubicalGrid g{{nx, ny}, {true, false}};
  const auto v = noise(g.vertex_count());
  for (auto _ : state) benchmark::DoNotOptimize(odd_cycle_birth(g, v));
}
BENCHMARK(BM_OddCycleBirth)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
