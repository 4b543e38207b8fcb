#include <benchmark/benchmark.h>

#include <birkhoff/discounted_hj.hpp>

using namespace birkhoff;

static void BM_BellmanApply(benchmark::State& state) {
  HJOptions o;
  o.n = static_cast<int>(state.range(0));
  const DiscountedBellman T(cosine_potential(), 1.0, o);
  std::vector<double> u(static_cast<std::size_t>(o.n), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(T.apply(u));
}
BENCHMARK(BM_BellmanApply)->Arg(512)->Arg(2048)->Unit(benchmark::kMicrosecond);

static void BM_SolveDiscounted(benchmark::State& state) {
  HJOptions o;
  o.n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_discounted(cosine_potential(), 1.0, o));
}
BENCHMARK(BM_SolveDiscounted)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
