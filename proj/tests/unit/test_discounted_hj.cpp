#include <doctest.h>

#include <birkhoff/discounted_hj.hpp>
#include <birkhoff/error.hpp>

#include <algorithm>
#include <random>

using namespace birkhoff;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

// sup difference between a coarse solution and the fine one at shared nodes
double nested_diff(const DiscountedSolution& coarse, const DiscountedSolution& fine) {
  const std::size_t r = fine.u.size() / coarse.u.size();
  double s = 0.0;
  for (std::size_t i = 0; i < coarse.u.size(); ++i) s = std::max(s, std::abs(coarse.u[i] - fine.u[i * r]));
  return s;
}

}  // namespace

TEST_CASE("zero potential: u = 0 and du = 0") {
  HJOptions o;
  o.n = 128;
  const DiscountedSolution s = solve_discounted(zero_potential(), 0.5, o);
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    CHECK(std::abs(s.u[i]) <= 1e-12);
    CHECK(std::abs(s.du_left[i]) <= 1e-9);
    CHECK(std::abs(s.du_right[i]) <= 1e-9);
  }
  const CellGrid g(128, 64, 1.0);
  CellSet band(g, CellLabel::Birkhoff);
  for (int i = 0; i < g.nq; ++i) band.insert(g.index(i, 31)), band.insert(g.index(i, 32));
  CHECK(check_graph_in_attractor(s, band, 0).pass);
}

TEST_CASE("cosine potential: residual and location of the extrema") {
  const Potential V = cosine_potential();
  for (double alpha : {0.1, 0.5, 1.0}) {
    CAPTURE(alpha);
    const DiscountedSolution s = solve_discounted(V, alpha);
    CHECK(s.residual <= 1e-10 * (1.0 - s.discount));
    const auto imin = std::min_element(s.u.begin(), s.u.end()) - s.u.begin();
    const auto imax = std::max_element(s.u.begin(), s.u.end()) - s.u.begin();
    // V peaks at q = 1/2 and bottoms out at q = 0
    CHECK(circle_distance(s.q[static_cast<std::size_t>(imin)], 0.5) <= 2.0 / s.q.size());
    CHECK(circle_distance(s.q[static_cast<std::size_t>(imax)], 0.0) <= 2.0 / s.q.size());
    CHECK(s.lipschitz <= s.lipschitz_bound * (1.0 + 1e-9));
  }
}

TEST_CASE("large discount: u approaches -V / alpha") {
  const Potential V = cosine_potential();
  std::vector<double> err;
  for (double alpha : {10.0, 20.0, 40.0}) {
    HJOptions o;
    o.n = 1024;
    const DiscountedSolution s = solve_discounted(V, alpha, o);
    double e = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) e = std::max(e, std::abs(s.u[i] + V.value(s.q[i]) / alpha));
    CHECK(e <= 1.0 / (alpha * alpha));
    err.push_back(e);
  }
  // the next term is -V'^2 / (2 alpha^3); below that the grid error takes over
  CHECK(err[0] <= 0.02 / 1000.0 + 1e-5);
}

TEST_CASE("Bellman operator is a monotone contraction") {
  const DiscountedBellman T(cosine_potential(), 0.7, HJOptions{});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> up(0.0, 0.5);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> a(static_cast<std::size_t>(T.size())), b(a.size()), c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      c[i] = a[i] + up(rng);
    }
    CHECK(sup_diff(T.apply(a), T.apply(b)) <= T.discount() * sup_diff(a, b) + 1e-12);
    const auto Ta = T.apply(a), Tc = T.apply(c);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(Ta[i] <= Tc[i] + 1e-15);
  }
  CHECK(T.discount() == doctest::Approx(std::exp(-0.7 * T.dt())));
}

TEST_CASE("grid refinement converges at first order") {
  const Potential V = cosine_potential();
  std::vector<DiscountedSolution> s;
  for (int n : {128, 256, 512, 1024}) {
    HJOptions o;
    o.n = n;
    s.push_back(solve_discounted(V, 0.5, o));
  }
  const double e1 = nested_diff(s[0], s[3]), e2 = nested_diff(s[1], s[3]);
  const double d1 = nested_diff(s[0], s[1]), d2 = nested_diff(s[1], s[2]);
  CHECK(e2 < e1);
  CHECK(std::log2(d1 / d2) >= 0.9);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(solve_discounted(cosine_potential(), 0.0), Error);
  HJOptions o;
  o.n = 64;
  const DiscountedSolution s = solve_discounted(cosine_potential(), 1.0, o);
  const CellGrid g(128, 128, 1.0);
  CHECK_THROWS_AS(check_graph_in_attractor(s, CellSet(g, CellLabel::Birkhoff), 3), Error);
}

TEST_CASE("mechanical system: graph of du lies in the grid Birkhoff attractor") {
  const Potential V = cosine_potential();
  const DiscountedSolution s = solve_discounted(V, 1.0);
  const CESMap m = make_damped_mechanical(V, 1.0, 0.05);
  const CellGrid g(256, 256, m.trapping_band);
  const BirkhoffSets b = birkhoff_attractor(m, conley_attractor(m, g, 400));
  const InclusionReport r = check_graph_in_attractor(s, b.birkhoff, 3);
  CHECK(r.pass);
  CHECK(r.fraction == 1.0);
  CHECK(r.samples == 2 * s.q.size());
}
