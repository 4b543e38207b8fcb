#pragma once

#include "birkhoff/annulus.hpp"
#include "birkhoff/cell_grid.hpp"

#include <cstdint>
#include <utility>

namespace birkhoff {

struct RotationEstimate {
  double rho_plus = 0.0;
  double rho_minus = 0.0;
  int n_orbit = 0;
  double err_bound = 0.0;
  bool charpentier_positive = false;  // rho_plus - rho_minus > 2 err_bound
};

/// Upper and lower accessible graphs of a grid Birkhoff set: per column, the
/// topmost (bottommost) cell of b whose upward (downward) vertical ray meets
/// no other cell of b and ends in uplus (uminus). Throws NonSeparatingInput
/// when a column has no such cell.
std::pair<CellSet, CellSet> accessible_sets(const CellSet& b, const CellSet& uplus,
                                            const CellSet& uminus);

struct RotationOptions {
  int windows = 8;            // disjoint orbit windows per seed
  std::uint64_t seed = 0x5eed;
};

/// Extremal Birkhoff averages of (x_n - x_0)/n over seeds at the centers of
/// bplus (maximum) and bminus (minimum), after a burn-in of n_orbit/10
/// steps. err_bound is the 95% bootstrap half-width over resampled windows,
/// floored at a rounding level.
RotationEstimate rotation_numbers(const CESMap& map, const CellSet& bplus,
                                  const CellSet& bminus, int n_orbit, int n_boot,
                                  const RotationOptions& opts = {});

}  // namespace birkhoff
