#pragma once

// Discounted Hamilton-Jacobi equation alpha u + |u'|^2 / 2 + V(q) = 0 on the
// circle, solved by semi-Lagrangian value iteration, and the check that the
// graph of du sits inside a cell approximation of the attractor.

#include "birkhoff/annulus.hpp"
#include "birkhoff/cell_grid.hpp"

#include <vector>

namespace birkhoff {

struct HJOptions {
  int n = 512;          // grid points on [0, 1)
  double dt = 0.0;      // time step, 0 means 1/n
  int controls = 201;   // velocities sampled in [-vmax, vmax]
  double tol = 1e-10;
  int max_policy_iterations = 200;
};

/// One Bellman update of the discounted problem,
///   (T u)(x) = min_v e^{-alpha dt} u(x - v dt) + dt (v^2/2 - V(x - v dt/2)),
/// with periodic linear interpolation. Optionally returns the minimizing v.
class DiscountedBellman {
 public:
  DiscountedBellman(Potential V, double alpha, const HJOptions& opts = {});

  std::vector<double> apply(const std::vector<double>& u,
                            std::vector<double>* velocity = nullptr) const;
  double discount() const { return beta_; }
  double dt() const { return dt_; }
  int size() const { return n_; }
  double max_speed() const { return vmax_; }

 private:
  Potential V_;
  double alpha_, dt_, beta_, vmax_;
  int n_, controls_;
};

struct DiscountedSolution {
  double alpha = 0.0;
  double dt = 0.0;
  double discount = 0.0;  // e^{-alpha dt}
  std::vector<double> q, u, du_left, du_right, velocity;
  double residual = 0.0;          // sup |T u - u|
  double lipschitz = 0.0;         // measured max |du|
  double lipschitz_bound = 0.0;   // sqrt(2 osc V)
  int iterations = 0;             // policy iterations used
};

/// Howard policy iteration on the Bellman operator (each policy evaluated
/// exactly by a sparse solve), stopped once sup |T u - u| < tol (1 - beta).
/// Throws InvalidArgument when alpha <= 0.
DiscountedSolution solve_discounted(const Potential& V, double alpha, const HJOptions& opts = {});

struct InclusionReport {
  std::size_t samples = 0;
  double fraction = 0.0;     // samples inside the dilated set
  double worst_cells = 0.0;  // largest cell distance of a sample to the set
  bool pass = false;
};

/// Both one-sided slopes at each grid point are tested against
/// dilate(b, eps_cells). Throws GridMismatch if the solution is sampled
/// more coarsely than the cell columns.
InclusionReport check_graph_in_attractor(const DiscountedSolution& sol, const CellSet& b,
                                         int eps_cells);

}  // namespace birkhoff
