#include <doctest.h>

#include "oracles.hpp"

#include <birkhoff/cell_grid.hpp>
#include <birkhoff/error.hpp>
#include <birkhoff/unstable_manifold.hpp>

using namespace birkhoff;

namespace {

std::vector<AnnulusPoint> zero_section_points(int n) {
  std::vector<AnnulusPoint> z;
  for (int i = 0; i < n; ++i) z.push_back({(i + 0.5) / n, 0.0});
  return z;
}

}  // namespace

TEST_CASE("trivial contraction: B0 = B = zero section band") {
  const CESMap m = make_trivial_contraction(0.5);
  const CellGrid g(256, 256, m.trapping_band);
  const CellSet b0 = conley_attractor(m, g, 30);
  const BirkhoffSets bs = birkhoff_attractor(m, b0);
  CHECK(oracle::hausdorff(b0.centers(), zero_section_points(256)) <= 2 * g.cell_diameter());
  CHECK(bs.birkhoff.bits == b0.bits);
  CHECK(is_subset(bs.birkhoff, b0));
  CHECK(occupies_every_column(bs.birkhoff));
}

TEST_CASE("zero iterations keep every cell") {
  const CESMap m = make_trivial_contraction(0.999);
  const CellGrid g(32, 32, 1.0);
  CHECK(conley_attractor(m, g, 0).count() == g.size());
}

TEST_CASE("refining the grid does not move the trivial attractor") {
  const CESMap m = make_trivial_contraction(0.5);
  double coarse = 0.0;
  for (int n : {64, 128, 256}) {
    const CellGrid g(n, n, m.trapping_band);
    const double d = hausdorff_distance(conley_attractor(m, g, 30), zero_section_points(4 * n));
    if (coarse > 0.0) CHECK(d <= coarse + 2.0 * m.trapping_band / (n / 2));
    coarse = d;
  }
}

TEST_CASE("pendulum: B0 contains both equilibria and B follows the unstable manifold") {
  const CESMap m = make_damped_pendulum(1.0);
  const CellGrid g(256, 256, m.trapping_band);
  const CellSet b0 = conley_attractor(m, g, 400);
  for (AnnulusPoint e : {AnnulusPoint{0.0, 0.0}, AnnulusPoint{0.5, 0.0}}) {
    const auto idx = g.locate(lift(e));
    REQUIRE(idx);
    // the equilibrium may sit on a cell corner, so allow the neighbours
    bool hit = false;
    const int i = static_cast<int>(*idx % g.nq), j = static_cast<int>(*idx / g.nq);
    for (int di = -1; di <= 0; ++di)
      for (int dj = -1; dj <= 0; ++dj) hit |= b0.contains((i + di + g.nq) % g.nq, j + dj);
    CHECK(hit);
  }
  const BirkhoffSets bs = birkhoff_attractor(m, b0);
  CHECK(is_subset(bs.birkhoff, b0));
  CHECK(occupies_every_column(bs.birkhoff));
  const UnstableManifold w = unstable_manifold(m, {0.5, 0.0}, 50.0);
  std::vector<AnnulusPoint> pts = manifold_points(w), sub;
  for (std::size_t i = 0; i < pts.size(); i += 5) sub.push_back(pts[i]);
  CHECK(oracle::hausdorff(bs.birkhoff.centers(), sub) <= 3.0 * g.cell_diameter());
  // forward invariance up to one cell
  CHECK(image_containment(m, bs.birkhoff, 1) >= 0.999);
}

TEST_CASE("whisker hair is in B0 but not in B") {
  const CESMap m = make_whisker_map();
  const CellGrid g(256, 256, m.trapping_band);
  const CellSet b0 = conley_attractor(m, g, 200);
  const BirkhoffSets bs = birkhoff_attractor(m, b0);
  auto top = [&](const CellSet& s) {
    int best = 0;
    for (int i = 120; i < 136; ++i)
      if (auto e = s.column_extent(i)) best = std::max(best, e->second);
    return g.center(0, best).p;
  };
  CHECK(top(b0) > 0.4);
  CHECK(top(bs.birkhoff) < 0.1);
  CHECK(bs.birkhoff.count() < b0.count());
  CHECK(occupies_every_column(bs.birkhoff));
}

TEST_CASE("hausdorff distance on cell sets") {
  const CellGrid g(16, 16, 1.0);
  CellSet a(g, CellLabel::Other), b(g, CellLabel::Other);
  a.insert(g.index(3, 4));
  b.insert(g.index(3, 9));
  CHECK(hausdorff_distance(a, a) == 0.0);
  CHECK(hausdorff_distance(a, b) == doctest::Approx(5 * g.cell_height()));

  std::mt19937_64 rng(2);
  std::bernoulli_distribution coin(0.05);
  for (int t = 0; t < 10; ++t) {
    CellSet x(g, CellLabel::Other), y(g, CellLabel::Other);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (coin(rng)) x.insert(i);
      if (coin(rng)) y.insert(i);
    }
    if (x.empty() || y.empty()) continue;
    CHECK(hausdorff_distance(x, y) == doctest::Approx(hausdorff_distance(y, x)));
    CHECK(hausdorff_distance(x, y) == doctest::Approx(oracle::hausdorff(x.centers(), y.centers())));
  }
}

TEST_CASE("dilation and chebyshev distance agree") {
  const CellGrid g(32, 16, 1.0);
  CellSet s(g, CellLabel::Other);
  s.insert(g.index(0, 8));
  s.insert(g.index(20, 3));
  const auto d = chebyshev_distance(s);
  const CellSet two = dilate(s, 2);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK((d[i] <= 2) == two.contains(i));
  // periodic in q: column 31 is next to column 0
  CHECK(d[g.index(31, 8)] == 1);
}

TEST_CASE("run-length encoding reproduces the bitmap") {
  const CellGrid g(8, 8, 1.0);
  CellSet s(g, CellLabel::Other);
  for (int i : {0, 1, 2, 9, 40, 63}) s.insert(static_cast<std::size_t>(i));
  const auto rle = run_length_encode(s);
  std::vector<std::uint8_t> back;
  std::uint8_t bit = 0;
  for (auto r : rle) {
    back.insert(back.end(), r, bit);
    bit ^= 1;
  }
  CHECK(back == s.bits);
}

TEST_CASE("unstable manifold rejects non-saddles and is stable under seeding") {
  CHECK_THROWS_AS(unstable_manifold(make_trivial_contraction(0.5), {0.2, 0.0}, 5.0), Error);
  const CESMap m = make_damped_pendulum(1.0);
  ManifoldOptions fine;
  fine.seed_distance = 0.5e-5;
  const auto a = manifold_points(unstable_manifold(m, {0.5, 0.0}, 10.0));
  const auto b = manifold_points(unstable_manifold(m, {0.5, 0.0}, 10.0, fine));
  std::vector<AnnulusPoint> sa, sb;
  for (std::size_t i = 0; i < a.size(); i += 10) sa.push_back(a[i]);
  for (std::size_t i = 0; i < b.size(); i += 10) sb.push_back(b[i]);
  // both traces lie on the same curve up to point spacing
  CHECK(oracle::hausdorff(sa, sb) <= 2e-5 + 10 * 1e-3);
}
