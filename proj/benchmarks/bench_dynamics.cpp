#include <benchmark/benchmark.h>

#include <birkhoff/curve.hpp>
#include <birkhoff/unstable_manifold.hpp>

using namespace birkhoff;

static void BM_PushZeroSection(benchmark::State& state) {
  const CESMap m = make_dissipative_standard(0.5, 0.9, cosine_potential());
  LagrangianCurve L = zero_section(1024);
  for (int i = 0; i < state.range(0); ++i) L = push_curve(m, L);
  for (auto _ : state) benchmark::DoNotOptimize(push_curve(m, L));
  state.counters["vertices"] = static_cast<double>(L.size());
}
BENCHMARK(BM_PushZeroSection)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_PendulumStep(benchmark::State& state) {
  const CESMap m = make_damped_pendulum(1.0);
  LiftedPoint z{0.3, 0.2};
  for (auto _ : state) {
    z = m.forward(z);
    if (std::abs(z.p) < 1e-6) z = {0.3, 0.2};
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(BM_PendulumStep);

static void BM_UnstableManifold(benchmark::State& state) {
  const CESMap m = make_damped_pendulum(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(unstable_manifold(m, {0.5, 0.0}, 10.0));
}
BENCHMARK(BM_UnstableManifold)->Unit(benchmark::kMillisecond);
