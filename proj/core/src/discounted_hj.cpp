#include "birkhoff/discounted_hj.hpp"

#include "birkhoff/error.hpp"
#include "birkhoff/parallel.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace birkhoff {

namespace {

double potential_oscillation(const Potential& V) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < 4096; ++i) {
    const double v = V.value(i / 4096.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

struct Stencil {
  int left;
  double weight;  // share of the left node
};

Stencil locate(double y, int n) {
  const double s = (y - std::floor(y)) * n;
  // y - floor(y) can round up to 1, which wraps to node 0
  const int left = std::min(static_cast<int>(s), n - 1);
  return {left, 1.0 - (s - left)};
}

}  // namespace

DiscountedBellman::DiscountedBellman(Potential V, double alpha, const HJOptions& opts)
    : V_(std::move(V)), alpha_(alpha), n_(opts.n), controls_(opts.controls) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "discount rate must be positive");
  if (n_ < 8 || controls_ < 3)
    throw Error(ErrorKind::InvalidArgument, "HJ grid needs n >= 8 and >= 3 controls");
  if (controls_ % 2 == 0) ++controls_;  // keep v = 0 among the controls
  dt_ = opts.dt > 0.0 ? opts.dt : 1.0 / n_;
  beta_ = std::exp(-alpha_ * dt_);
  vmax_ = 1.25 * std::sqrt(2.0 * potential_oscillation(V_)) + 1e-3;
}

std::vector<double> DiscountedBellman::apply(const std::vector<double>& u,
                                             std::vector<double>* velocity) const {
  if (static_cast<int>(u.size()) != n_)
    throw Error(ErrorKind::GridMismatch, "Bellman operator: size mismatch");
  std::vector<double> out(u.size());
  if (velocity) velocity->assign(u.size(), 0.0);
  parallel_for(0, u.size(), [&](std::size_t i) {
    const double x = static_cast<double>(i) / n_;
    double best = std::numeric_limits<double>::infinity(), arg = 0.0;
    for (int c = 0; c < controls_; ++c) {
      const double v = vmax_ * (2.0 * c / (controls_ - 1) - 1.0);
      const Stencil st = locate(x - v * dt_, n_);
      const double ui = st.weight * u[static_cast<std::size_t>(st.left)] +
                        (1.0 - st.weight) * u[static_cast<std::size_t>((st.left + 1) % n_)];
      const double val = beta_ * ui + dt_ * (0.5 * v * v - V_.value(x - 0.5 * v * dt_));
      if (val < best) {
        best = val;
        arg = v;
      }
    }
    out[i] = best;
    if (velocity) (*velocity)[i] = arg;
  });
  return out;
}

DiscountedSolution solve_discounted(const Potential& V, double alpha, const HJOptions& opts) {
  const DiscountedBellman T(V, alpha, opts);
  const int n = T.size();
  const double beta = T.discount(), dt = T.dt();
  std::vector<double> u(static_cast<std::size_t>(n), 0.0), vel;
  DiscountedSolution sol;
  sol.alpha = alpha;
  sol.dt = dt;
  sol.discount = beta;

  for (int it = 0; it < opts.max_policy_iterations; ++it) {
    const std::vector<double> tu = T.apply(u, &vel);
    double gap = 0.0;
    for (int i = 0; i < n; ++i) gap = std::max(gap, std::abs(tu[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(i)]));
    sol.iterations = it + 1;
    if (gap < opts.tol * (1.0 - beta)) break;
    // Evaluate the current policy: (I - beta P) u = c.
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) / n, v = vel[static_cast<std::size_t>(i)];
      const Stencil st = locate(x - v * dt, n);
      trip.emplace_back(i, i, 1.0);
      trip.emplace_back(i, st.left, -beta * st.weight);
      trip.emplace_back(i, (st.left + 1) % n, -beta * (1.0 - st.weight));
      rhs(i) = dt * (0.5 * v * v - V.value(x - 0.5 * v * dt));
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorKind::InvalidArgument, "policy evaluation failed");
    const Eigen::VectorXd sol_u = lu.solve(rhs);
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = sol_u(i);
  }

  const std::vector<double> tu = T.apply(u, &vel);
  sol.residual = 0.0;
  for (int i = 0; i < n; ++i)
    sol.residual = std::max(sol.residual, std::abs(tu[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(i)]));
  sol.u = tu;
  sol.velocity = vel;
  sol.q.resize(static_cast<std::size_t>(n));
  sol.du_left.resize(static_cast<std::size_t>(n));
  sol.du_right.resize(static_cast<std::size_t>(n));
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto km = static_cast<std::size_t>((i + n - 1) % n), kp = static_cast<std::size_t>((i + 1) % n);
    sol.q[k] = i * h;
    sol.du_left[k] = (sol.u[k] - sol.u[km]) / h;
    sol.du_right[k] = (sol.u[kp] - sol.u[k]) / h;
    sol.lipschitz = std::max({sol.lipschitz, std::abs(sol.du_left[k]), std::abs(sol.du_right[k])});
  }
  sol.lipschitz_bound = std::sqrt(2.0 * potential_oscillation(V));
  return sol;
}

InclusionReport check_graph_in_attractor(const DiscountedSolution& sol, const CellSet& b,
                                         int eps_cells) {
  if (static_cast<int>(sol.q.size()) < b.grid.nq)
    throw Error(ErrorKind::GridMismatch, "HJ solution is coarser than the cell grid");
  if (b.empty()) throw Error(ErrorKind::EmptySet, "attractor cell set is empty");
  const CellSet fat = dilate(b, eps_cells);
  const std::vector<int> dist = chebyshev_distance(b);
  InclusionReport rep;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < sol.q.size(); ++i) {
    for (double p : {sol.du_left[i], sol.du_right[i]}) {
      ++rep.samples;
      const auto cell = b.grid.locate({sol.q[i], p});
      if (!cell) {
        rep.worst_cells = std::numeric_limits<double>::infinity();
        continue;
      }
      if (fat.bits[*cell]) ++inside;
      rep.worst_cells = std::max(rep.worst_cells, static_cast<double>(dist[*cell]));
    }
  }
  rep.fraction = static_cast<double>(inside) / static_cast<double>(rep.samples);
  rep.pass = inside == rep.samples;
  return rep;
}

}  // namespace birkhoff
