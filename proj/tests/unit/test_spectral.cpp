#include <doctest.h>

#include "oracles.hpp"

#include <birkhoff/curve.hpp>
#include <birkhoff/error.hpp>
#include <birkhoff/spectral.hpp>

using namespace birkhoff;

namespace {

Periodic1D periodic(const oracle::Trig& t) {
  return {[t](double q) { return t(q); }, [t](double q) { return t.d1(q); },
          [t](double q) { return t.d2(q); }};
}

BraneGF graph_brane(const oracle::Trig& t, int nq = 1024, double shift = 0.0) {
  return {graph_gf(periodic(t), nq), shift};
}

LagrangianCurve graph_of(const oracle::Trig& t, std::size_t n = 2048) {
  return graph_curve([t](double q) { return t(q); }, [t](double q) { return t.d1(q); }, n);
}

}  // namespace

TEST_CASE("graph GF: c(1) = min f and c(mu) = max f") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10; ++i) {
    const oracle::Trig f = oracle::random_trig(rng, 5, 0.1);
    const auto [lo, hi] = oracle::extremes(f);
    const DiscreteGF s = graph_gf(periodic(f), 1024);
    const SpectralValue a = c_invariant(s, CohomologyClass::PointClass);
    const SpectralValue b = c_invariant(s, CohomologyClass::FundamentalClass);
    CHECK(std::abs(a.polished - lo) <= 1e-6);
    CHECK(std::abs(b.polished - hi) <= 1e-6);
    // the grid value brackets the critical value from the correct side
    CHECK(a.raw >= a.polished);
    CHECK(b.raw <= b.polished);
  }
}

TEST_CASE("shift equivariance is exact") {
  std::mt19937_64 rng(4);
  const oracle::Trig f = oracle::random_trig(rng, 4, 0.2);
  const DiscreteGF s = graph_gf(periodic(f), 512);
  for (double c : {-1.5, 0.25, 3.0}) {
    for (auto cls : {CohomologyClass::PointClass, CohomologyClass::FundamentalClass}) {
      const double base = c_invariant(s, cls).polished;
      const double moved = c_invariant(shift_gf(s, c), cls).polished;
      CHECK(std::abs(moved - (base + c)) <= 4 * std::numeric_limits<double>::epsilon() * (1 + std::abs(base + c)));
    }
  }
}

TEST_CASE("stabilization leaves the invariants unchanged") {
  oracle::Trig f{{0.2, 0.0, 0.05}, {0.0, 0.1, 0.0}};
  const DiscreteGF s = graph_gf(periodic(f), 256);
  const double lo = c_invariant(s, CohomologyClass::PointClass).polished;
  const double hi = c_invariant(s, CohomologyClass::FundamentalClass).polished;
  for (double r : {1.0, -1.0}) {
    CAPTURE(r);
    const DiscreteGF st = stabilize(s, Eigen::MatrixXd::Constant(1, 1, r));
    const SpectralValue a = c_invariant(st, CohomologyClass::PointClass);
    const SpectralValue b = c_invariant(st, CohomologyClass::FundamentalClass);
    CHECK(a.polished == doctest::Approx(lo).epsilon(1e-9));
    CHECK(b.polished == doctest::Approx(hi).epsilon(1e-9));
    if (r < 0) {
      CHECK(a.method == "persistence");
      CHECK(a.degree == 1);
      CHECK(b.degree == 2);
    }
  }
}

TEST_CASE("fast path and persistence path agree on index-0 GFs") {
  std::mt19937_64 rng(9);
  SpectralOptions pers;
  pers.force_persistence = true;
  for (int i = 0; i < 6; ++i) {
    const DiscreteGF s = graph_gf(periodic(oracle::random_trig(rng, 5, 0.3)), 1024);
    for (auto cls : {CohomologyClass::PointClass, CohomologyClass::FundamentalClass}) {
      const SpectralValue a = c_invariant(s, cls), b = c_invariant(s, cls, pers);
      CHECK(a.method == "fastpath");
      CHECK(b.method == "persistence");
      CHECK(std::abs(a.raw - b.raw) <= 1e-10);
      CHECK(std::abs(a.polished - b.polished) <= 1e-10);
    }
  }
}

TEST_CASE("graph pairs: c- = min(g - f), c+ = max(g - f), duality") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 10; ++i) {
    const oracle::Trig f = oracle::random_trig(rng, 5, 0.1), g = oracle::random_trig(rng, 5, 0.1);
    const auto [lo, hi] = oracle::extremes([&](double q) { return g(q) - f(q); });
    const SpectralPair p = spectral_pair(graph_brane(f), graph_brane(g));
    const SpectralPair back = spectral_pair(graph_brane(g), graph_brane(f));
    CHECK(std::abs(p.c_minus - lo) <= 1e-6);
    CHECK(std::abs(p.c_plus - hi) <= 1e-6);
    CHECK(p.c_plus >= p.c_minus);
    CHECK(std::abs(p.c_plus + back.c_minus) <= 1e-6);
    CHECK(gamma_by_shift_infimum(graph_brane(f), graph_brane(g)) == doctest::Approx(p.gamma()).epsilon(1e-6));
  }
}

TEST_CASE("sine graph is at gamma distance 2 from the zero section") {
  const oracle::Trig zero{{}, {}}, sine{{0.0}, {1.0}};
  CHECK(gamma_distance(graph_brane(zero), graph_brane(sine)) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("a brane and its fiber shift: gamma 0, c = |shift|") {
  std::mt19937_64 rng(5);
  const oracle::Trig f = oracle::random_trig(rng, 3, 0.2);
  for (double c : {0.3, -0.7}) {
    const SpectralPair p = spectral_pair(graph_brane(f), graph_brane(f, 1024, c));
    CHECK(p.c_minus == doctest::Approx(c));
    CHECK(p.c_plus == doctest::Approx(c));
    CHECK(std::abs(p.gamma()) <= 1e-12);
    CHECK(p.c() == doctest::Approx(std::abs(c)));
    CHECK(gamma_distance(graph_brane(f), graph_brane(f)) == 0.0);
    CHECK(c_distance(graph_brane(f), graph_brane(f)) == 0.0);
  }
}

TEST_CASE("metric axioms on graphs and broken-geodesic branes") {
  std::mt19937_64 rng(77);
  std::vector<BraneGF> corpus;
  for (int i = 0; i < 26; ++i) corpus.push_back(graph_brane(oracle::random_trig(rng, 5, 0.05)));
  const CESMap m = make_dissipative_standard(0.5, 0.3, cosine_potential());
  for (int n = 1; n <= 3; ++n) corpus.push_back({broken_geodesic_gf(m, n), 0.0});
  corpus.push_back({stabilize(graph_gf(periodic(oracle::random_trig(rng, 2, 0.05)), 1024),
                              Eigen::MatrixXd::Constant(1, 1, -1.0), 1.0, 16), 0.0});
  REQUIRE(corpus.size() == 30);
  const std::size_t n = corpus.size();
  std::vector<double> gm(n * n), cm(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const SpectralPair p = spectral_pair(corpus[i], corpus[j]);
      CHECK(p.c_plus >= p.c_minus - 1e-12);
      gm[i * n + j] = p.gamma();
      cm[i * n + j] = p.c();
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(std::abs(gm[i * n + j] - gm[j * n + i]) <= 1e-8);
      CHECK(std::abs(cm[i * n + j] - cm[j * n + i]) <= 1e-8);
      if (i != j) CHECK(gm[i * n + j] > 0.0);
    }
  int bad = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (gm[i * n + k] > gm[i * n + j] + gm[j * n + k] + 1e-8) ++bad;
        if (cm[i * n + k] > cm[i * n + j] + cm[j * n + k] + 1e-8) ++bad;
      }
  CHECK(bad == 0);
}

TEST_CASE("symplectic maps leave the pair invariants unchanged") {
  const CESMap m = make_dissipative_standard(1.0, 0.05, cosine_potential());
  std::mt19937_64 rng(12);
  for (int i = 0; i < 3; ++i) {
    const oracle::Trig f = oracle::random_trig(rng, 3, 0.002), g = oracle::random_trig(rng, 3, 0.002);
    const LagrangianCurve L1 = graph_of(f), L2 = graph_of(g);
    PushOptions fine;
    fine.spacing = 2e-4;
    const LagrangianCurve M1 = push_curve(m, L1, fine), M2 = push_curve(m, L2, fine);
    REQUIRE(is_graph(M1));
    REQUIRE(is_graph(M2));
    const SpectralPair before = spectral_pair(graph_brane(f), graph_brane(g));
    const SpectralPair after = spectral_pair({graph_gf_from_curve(M1), 0.0}, {graph_gf_from_curve(M2), 0.0});
    CHECK(std::abs(after.c_minus - before.c_minus) <= 1e-6);
    CHECK(std::abs(after.c_plus - before.c_plus) <= 1e-6);
  }
}

TEST_CASE("conformal maps scale gamma by a") {
  const CESMap m = make_dissipative_standard(0.5, 0.3, cosine_potential());
  std::mt19937_64 rng(13);
  const oracle::Trig f = oracle::random_trig(rng, 3, 0.01), g = oracle::random_trig(rng, 3, 0.01);
  PushOptions fine;
  fine.spacing = 2e-4;
  const double before = gamma_distance(graph_brane(f), graph_brane(g));
  const double after = gamma_distance({graph_gf_from_curve(push_curve(m, graph_of(f), fine)), 0.0},
                                      {graph_gf_from_curve(push_curve(m, graph_of(g), fine)), 0.0});
  CHECK(after / before == doctest::Approx(m.a).epsilon(0.02));
}

TEST_CASE("a kick moves a graph by at most the oscillation of its Hamiltonian") {
  // p -> p + k V'(q) is the time-one flow of H = -k V(q)
  const double k = 0.4;
  const Potential V = cosine_potential();
  CESMap kick;
  kick.name = "kick";
  kick.a = 1.0;
  kick.forward = [&](LiftedPoint z) { return LiftedPoint{z.x, z.p + k * V.slope(z.x)}; };
  kick.inverse = [&](LiftedPoint z) { return LiftedPoint{z.x, z.p - k * V.slope(z.x)}; };
  const double hofer = k * oracle::oscillation(V.value);
  std::mt19937_64 rng(14);
  for (int i = 0; i < 4; ++i) {
    const oracle::Trig f = oracle::random_trig(rng, 3, 0.05);
    const LagrangianCurve img = push_curve(kick, graph_of(f));
    const double g = gamma_distance(graph_brane(f), {graph_gf_from_curve(img), 0.0});
    CHECK(g <= hofer + 1e-6);
  }
}

TEST_CASE("persistence backend refuses large fiber counts") {
  const DiscreteGF s = graph_gf([](double q) { return std::sin(2 * M_PI * q); }, 32);
  const DiscreteGF st = stabilize(s, -Eigen::MatrixXd::Identity(3, 3), 1.0, 8);
  CHECK_THROWS_AS(c_invariant(st, CohomologyClass::PointClass), Error);
}
