#include <benchmark/benchmark.h>

#include <birkhoff/spectral.hpp>

#include <cmath>

using namespace birkhoff;

static void BM_GraphPair(benchmark::State& state) {
  const int nq = static_cast<int>(state.range(0));
  const BraneGF f{graph_gf([](double q) { return 0.1 * std::sin(2 * M_PI * q); }, nq), 0.0};
  const BraneGF g{graph_gf([](double q) { return 0.05 * std::cos(6 * M_PI * q); }, nq), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(spectral_pair(f, g));
}
BENCHMARK(BM_GraphPair)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

static void BM_BrokenGeodesicPair(benchmark::State& state) {
  const CESMap m = make_dissipative_standard(0.5, 0.3, cosine_potential());
  const int n = static_cast<int>(state.range(0));
  const BraneGF a{broken_geodesic_gf(m, n), 0.0}, b{broken_geodesic_gf(m, n + 1), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(spectral_pair(a, b));
}
BENCHMARK(BM_BrokenGeodesicPair)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_StabilizedPersistence(benchmark::State& state) {
  const DiscreteGF s = stabilize(graph_gf([](double q) { return std::sin(2 * M_PI * q); }, 256),
                                 Eigen::MatrixXd::Constant(1, 1, -1.0));
  for (auto _ : state) benchmark::DoNotOptimize(c_invariant(s, CohomologyClass::FundamentalClass));
}
BENCHMARK(BM_StabilizedPersistence)->Unit(benchmark::kMillisecond);
