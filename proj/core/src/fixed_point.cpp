#include "birkhoff/fixed_point.hpp"

#include "birkhoff/error.hpp"

#include <algorithm>
#include <cmath>

namespace birkhoff {

namespace {

double curve_gamma(const LagrangianCurve& l0, const LagrangianCurve& l1, int nq) {
  if (!is_graph(l0) || !is_graph(l1))
    throw Error(ErrorKind::NotExact, "gamma between iterates needs graph curves");
  return gamma_distance({graph_gf_from_curve(l0, nq), 0.0}, {graph_gf_from_curve(l1, nq), 0.0});
}

bool is_zero_section(const LagrangianCurve& L) {
  return std::all_of(L.vertices.begin(), L.vertices.end(),
                     [](const LiftedPoint& z) { return z.p == 0.0; });
}

}  // namespace

CompletionElement iterate_to_fixed_point(const CESMap& map, const LagrangianCurve& start,
                                         double tol, int n_max, const FixedPointOptions& opts) {
  if (!(map.a > 0.0 && map.a < 1.0))
    throw Error(ErrorKind::InvalidArgument, "fixed-point iteration needs 0 < a < 1");
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be positive");
  const double area = signed_area(start);
  if (!opts.translation && std::abs(area) > opts.exact_tolerance)
    throw Error(ErrorKind::NotExact, "start curve is not exact and no translation was given");
  if (opts.translation && std::abs(area - *opts.translation) > opts.exact_tolerance)
    throw Error(ErrorKind::NotExact, "start curve area differs from the translation height");

  CompletionElement ce;
  ce.a = map.a;
  const double alpha = opts.translation.value_or(0.0);
  LagrangianCurve raw = start;
  ce.iterates.push_back(start);
  double scale = 1.0;  // a^n

  auto next = [&]() -> bool {
    try {
      raw = push_curve(map, raw, opts.push);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CurveComplexityOverflow) throw;
      ce.overflow = true;
      return false;
    }
    scale *= map.a;
    ce.iterates.push_back(alpha != 0.0 ? fiber_translate(raw, -scale * alpha) : raw);
    return true;
  };

  if (!next()) throw Error(ErrorKind::CurveComplexityOverflow, "first iterate overflowed");
  // Base pair (Lambda_0, Lambda_1), or (Lambda_1, Lambda_2) when Lambda_0 is
  // not exact; base_n is the index of its first member.
  int base_n = 0;
  if (!opts.translation) {
    if (map.primitive_step && is_zero_section(start)) {
      BrokenGeodesicOptions bo;
      bo.nq = opts.gamma_nq;
      const DiscreteGF s1 = broken_geodesic_gf(map, 1, std::nullopt, bo);
      ce.gamma01 = gamma_distance({graph_gf([](double) { return 0.0; }, opts.gamma_nq), 0.0},
                                  {s1, 0.0});
      ce.gamma_method = "graph_vs_generating_function";
    } else {
      ce.gamma01 = curve_gamma(ce.iterates[0], ce.iterates[1], opts.gamma_nq);
      ce.gamma_method = "graph_vs_graph";
    }
  } else {
    base_n = 1;
    if (!next()) throw Error(ErrorKind::CurveComplexityOverflow, "second iterate overflowed");
    ce.gamma01 = curve_gamma(ce.iterates[1], ce.iterates[2], opts.gamma_nq);
    ce.gamma_method = "translated_graph_vs_graph";
  }

  auto bound = [&](int n) {
    return std::pow(map.a, n - base_n) * ce.gamma01 / (1.0 - map.a);
  };
  ce.tail_bounds.clear();
  for (int n = 0; n < static_cast<int>(ce.iterates.size()); ++n)
    ce.tail_bounds.push_back(n < base_n ? std::numeric_limits<double>::infinity() : bound(n));
  while (static_cast<int>(ce.iterates.size()) - 1 < n_max && ce.tail_bounds.back() >= tol) {
    if (!next()) break;
    ce.tail_bounds.push_back(bound(static_cast<int>(ce.iterates.size()) - 1));
  }
  ce.n_used = static_cast<int>(ce.iterates.size()) - 1;
  return ce;
}

std::vector<double> gamma_gaps(const CESMap& map, int n_max, const BrokenGeodesicOptions& opts) {
  if (!map.primitive_step)
    throw Error(ErrorKind::MissingPrimitiveStep, "gamma_gaps needs a one-step generating function");
  std::vector<BraneGF> branes;
  branes.push_back({graph_gf([](double) { return 0.0; }, opts.nq), 0.0});
  for (int n = 1; n <= n_max; ++n) {
    ReductionReport rep;
    DiscreteGF s = reduce(broken_geodesic_gf(map, n, std::nullopt, opts), &rep);
    branes.push_back({std::move(s), 0.0});
  }
  std::vector<double> gaps;
  for (int n = 0; n < n_max; ++n)
    gaps.push_back(gamma_distance(branes[static_cast<std::size_t>(n)],
                                  branes[static_cast<std::size_t>(n) + 1]));
  return gaps;
}

BinftyEstimate estimate_binfty(const CompletionElement& ce, const CellGrid& grid, int last,
                               int dilation) {
  if (ce.iterates.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "estimate needs at least two iterates");
  last = std::clamp(last, 1, static_cast<int>(ce.iterates.size()));
  BinftyEstimate out;
  out.n_used = ce.n_used;
  out.tail_bound = ce.tail_bound();
  out.cells = rasterize(ce.iterates.back(), grid, CellLabel::BinftyEstimate);
  for (int j = 2; j <= last; ++j) {
    const CellSet other =
        dilate(rasterize(ce.iterates[ce.iterates.size() - static_cast<std::size_t>(j)], grid),
               dilation);
    const CellSet mine = dilate(out.cells, dilation);
    for (std::size_t i = 0; i < out.cells.bits.size(); ++i)
      out.cells.bits[i] = (j == 2 ? mine.bits[i] : out.cells.bits[i]) & other.bits[i];
  }
  if (out.cells.empty()) throw Error(ErrorKind::EmptySet, "empty B-infinity rasterization");
  return out;
}

ValidationReport validate_equivalence(const CESMap& map, const CellGrid& grid, double tol_cells,
                                      const ValidationOptions& opts) {
  ValidationReport rep;
  rep.a = map.a;
  try {
    rep.b0 = conley_attractor(map, grid, opts.conley_iterations, opts.conley);
    rep.birkhoff = birkhoff_attractor(map, rep.b0, opts.birkhoff_slack).birkhoff;
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("grid pipeline: ") + e.what());
  }
  try {
    rep.completion =
        iterate_to_fixed_point(map, zero_section(), opts.tol, opts.n_max, opts.fixed_point);
    rep.binfty = estimate_binfty(rep.completion, grid, opts.last, opts.dilation).cells;
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("spectral pipeline: ") + e.what());
  }
  rep.gamma01 = rep.completion.gamma01;
  rep.n_used = rep.completion.n_used;
  rep.tail_bound = rep.completion.tail_bound();
  rep.overflow = rep.completion.overflow;
  rep.hausdorff = hausdorff_distance(rep.birkhoff, rep.binfty);
  rep.hausdorff_cells = rep.hausdorff / grid.cell_diameter();
  const auto cols = column_discrepancy(rep.birkhoff, rep.binfty);
  rep.per_column_max = cols.empty() ? 0 : *std::max_element(cols.begin(), cols.end());
  rep.pass = rep.hausdorff_cells <= tol_cells;
  return rep;
}

}  // namespace birkhoff
