#include <doctest.h>

#include "oracles.hpp"

#include <birkhoff/fixed_point.hpp>
#include <birkhoff/unstable_manifold.hpp>

using namespace birkhoff;

TEST_CASE("trivial contraction fixes the zero section") {
  const CESMap m = make_trivial_contraction(0.5);
  const CompletionElement ce = iterate_to_fixed_point(m, zero_section(256), 1e-9, 10);
  for (const auto& L : ce.iterates)
    for (const auto& v : L.vertices) CHECK(v.p == 0.0);
  CHECK(ce.tail_bound() == 0.0);
}

TEST_CASE("translated start: corrected iterates are the zero section") {
  const CESMap m = make_trivial_contraction(0.5);
  FixedPointOptions opts;
  opts.translation = 0.4;
  const CompletionElement ce = iterate_to_fixed_point(m, horizontal_circle(0.4, 256), 1e-9, 8, opts);
  REQUIRE(ce.iterates.size() >= 2);
  for (std::size_t n = 1; n < ce.iterates.size(); ++n)
    for (const auto& v : ce.iterates[n].vertices) CHECK(std::abs(v.p) <= 1e-14);
}

TEST_CASE("gamma gaps decay geometrically with ratio a") {
  // at a = 0.8 the psi^4 GF keeps two fibers after reduction, beyond the backend
  for (auto [a, count] : {std::pair{0.3, 4}, std::pair{0.5, 4}, std::pair{0.8, 3}}) {
    CAPTURE(a);
    const CESMap m = make_dissipative_standard(a, 0.3, cosine_potential());
    const std::vector<double> gaps = gamma_gaps(m, count);
    REQUIRE(gaps.size() == static_cast<std::size_t>(count));
    for (std::size_t n = 0; n < gaps.size(); ++n)
      CHECK(gaps[n] <= std::pow(a, static_cast<double>(n)) * gaps[0] * 1.02);
    // slope of log gap against n
    const double slope = (std::log(gaps.back()) - std::log(gaps[0])) / (count - 1);
    CHECK(slope == doctest::Approx(std::log(a)).epsilon(0.1));
  }
}

TEST_CASE("area gaps between successive iterates shrink by a") {
  const CESMap m = make_dissipative_standard(0.5, 0.3, cosine_potential());
  FixedPointOptions opts;
  opts.push.spacing = 5e-4;
  const CompletionElement ce = iterate_to_fixed_point(m, zero_section(2048), 1e-8, 12, opts);
  REQUIRE(ce.n_used >= 6);
  for (int n = 4; n < ce.n_used; ++n) {
    const auto k = static_cast<std::size_t>(n);
    const double prev = area_gap(ce.iterates[k - 1], ce.iterates[k]);
    const double next = area_gap(ce.iterates[k], ce.iterates[k + 1]);
    CHECK(std::abs(next - m.a * prev) <= 1e-6);
  }
  const double n = ce.n_used;
  CHECK(ce.tail_bound() == doctest::Approx(std::pow(m.a, n) * ce.gamma01 / (1.0 - m.a)));
}

TEST_CASE("trivial contraction: B-infinity estimate equals grid B") {
  const CESMap m = make_trivial_contraction(0.5);
  const CellGrid g(256, 256, m.trapping_band);
  const ValidationReport r = validate_equivalence(m, g, 2.0);
  CHECK(r.pass);
  CHECK(r.hausdorff_cells <= 2.0);
  CHECK(occupies_every_column(r.binfty));
  CHECK(occupies_every_column(r.birkhoff));
}

TEST_CASE("standard family: B-infinity estimate agrees with grid B") {
  const CESMap m = make_dissipative_standard(0.5, 0.9, cosine_potential());
  const CellGrid g(256, 256, m.trapping_band);
  const ValidationReport r = validate_equivalence(m, g, 5.0);
  CHECK(r.pass);
  CHECK(r.hausdorff_cells <= 5.0);
  CHECK(occupies_every_column(r.binfty));
  // forward invariance up to one cell
  CHECK(image_containment(m, r.binfty, 1) >= 0.99);
}

TEST_CASE("whisker: neither pipeline keeps the hair") {
  const CESMap m = make_whisker_map();
  const CellGrid g(256, 256, m.trapping_band);
  ValidationOptions vo;
  vo.tol = 1e-4;
  const ValidationReport r = validate_equivalence(m, g, 5.0, vo);
  auto top = [&](const CellSet& s) {
    int best = 0;
    for (int i = 120; i < 136; ++i)
      if (auto e = s.column_extent(i)) best = std::max(best, e->second);
    return g.center(0, best).p;
  };
  CHECK(top(r.b0) > 0.4);
  CHECK(top(r.birkhoff) < 0.1);
  CHECK(top(r.binfty) < 0.1);
}

TEST_CASE("pendulum: B-infinity estimate against the unstable manifold") {
  const CESMap m = make_damped_pendulum(1.0);
  const CellGrid g(256, 256, m.trapping_band);
  ValidationOptions vo;
  vo.tol = 1e-4;
  const ValidationReport r = validate_equivalence(m, g, 5.0, vo);
  const auto pts = manifold_points(unstable_manifold(m, {0.5, 0.0}, 50.0));
  std::vector<AnnulusPoint> sub;
  for (std::size_t i = 0; i < pts.size(); i += 5) sub.push_back(pts[i]);
  CHECK(oracle::hausdorff(r.binfty.centers(), sub) <= 5.0 * g.cell_diameter());
  CHECK(r.pass);
}
