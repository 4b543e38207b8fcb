#pragma once

// Banach iteration of a CES contraction on exact curves, tail bounds in the
// gamma metric, and the curve-trace estimate of the generalized attractor.

#include "birkhoff/cell_grid.hpp"
#include "birkhoff/curve.hpp"
#include "birkhoff/genfun.hpp"
#include "birkhoff/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace birkhoff {

struct FixedPointOptions {
  PushOptions push;
  /// Height alpha of a non-exact start S^1 x {alpha}; iterates are then
  /// corrected by the fiber translation tau_{-a^n alpha}.
  std::optional<double> translation;
  int gamma_nq = 1024;
  double exact_tolerance = 1e-7;
};

struct CompletionElement {
  std::vector<LagrangianCurve> iterates;  // Lambda_0, ..., Lambda_n_used
  std::vector<double> tail_bounds;        // gamma(Lambda_n, limit) bounds
  double gamma01 = 0.0;  // gamma(Lambda_0, Lambda_1), or (Lambda_1, Lambda_2) with translation
  double a = 1.0;
  int n_used = 0;
  bool overflow = false;  // stopped by the curve vertex budget
  std::string gamma_method;

  double tail_bound() const { return tail_bounds.empty() ? 0.0 : tail_bounds.back(); }
};

/// Lambda_{n+1} = psi(Lambda_n) until the tail bound a^n gamma01 / (1 - a)
/// drops below tol, n_max is reached, or the curve overflows its budget.
CompletionElement iterate_to_fixed_point(const CESMap& map, const LagrangianCurve& start,
                                         double tol, int n_max,
                                         const FixedPointOptions& opts = {});

/// gamma(Lambda_n, Lambda_{n+1}) for n = 0..n_max-1 measured directly on the
/// reduced broken-geodesic GFs of psi^n applied to the zero section.
std::vector<double> gamma_gaps(const CESMap& map, int n_max,
                               const BrokenGeodesicOptions& opts = {});

struct BinftyEstimate {
  CellSet cells;
  int n_used = 0;
  double tail_bound = 0.0;
};

/// Cells met by the last iterate, or the intersection of the `last` final
/// iterates after dilating each rasterization by `dilation` cells. This is
/// an outer estimate of a set containing the gamma-support of the limit.
BinftyEstimate estimate_binfty(const CompletionElement& ce, const CellGrid& grid,
                               int last = 1, int dilation = 1);

struct ValidationOptions {
  int conley_iterations = 200;
  ConleyOptions conley;
  int birkhoff_slack = 1;
  double tol = 1e-6;  // target tail bound
  int n_max = 60;
  FixedPointOptions fixed_point;
  int last = 1;
  int dilation = 1;
};

struct ValidationReport {
  double gamma01 = 0.0;
  double a = 1.0;
  int n_used = 0;
  double tail_bound = 0.0;
  double hausdorff = 0.0;        // (q, p) units
  double hausdorff_cells = 0.0;  // in cell diameters
  int per_column_max = 0;
  bool pass = false;
  bool overflow = false;
  CellSet b0, birkhoff, binfty;
  CompletionElement completion;
};

/// Runs the grid pipeline (B) and the curve iteration (B-infinity estimate)
/// and compares them.
ValidationReport validate_equivalence(const CESMap& map, const CellGrid& grid, double tol_cells,
                                      const ValidationOptions& opts = {});

}  // namespace birkhoff
