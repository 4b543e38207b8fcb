#pragma once

// Generating functions quadratic at infinity over S^1, sampled on
// base x fiber-window grids, and their algebra (difference, sum, shift,
// stabilization) plus fiberwise reduction of broken-geodesic chains.

#include "birkhoff/annulus.hpp"

#include <Eigen/Core>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace birkhoff {

struct LagrangianCurve;

/// A 1-periodic function given with its first two derivatives.
struct Periodic1D {
  std::function<double(double)> value;
  std::function<double(double)> slope;
  std::function<double(double)> curvature;
};

/// Periodic cubic Hermite interpolant through (x_k, f_k, f'_k) with the
/// nodes spanning one period [x_0, x_0 + 1).
class PeriodicHermite {
 public:
  PeriodicHermite(std::vector<double> x, std::vector<double> f, std::vector<double> df);
  double value(double x) const;
  double slope(double x) const;
  double curvature(double x) const;
  Periodic1D as_function() const;
  std::size_t size() const { return x_.size(); }

 private:
  struct Segment {
    double h, f0, f1, d0, d1, t;
  };
  Segment segment(double x) const;
  std::vector<double> x_, f_, df_;
};

/// Chain structure of a broken-geodesic GF: with x_i = q + xi_i and x_m = q,
///   S = a^m G(x_0) + sum_{i<m} a^{m-1-i} h(x_i, x_{i+1}) + offset.
/// G is the primitive of the starting graph (zero for the zero section).
struct ChainData {
  double a = 1.0;
  int steps = 0;
  TwistGenerator h;
  Periodic1D bottom;
  double band = 0.0;     // a priori bound on |p| along orbits
  double offset = 0.0;
  int reduced_levels = 0;
};

struct DiscreteGF {
  std::string family;
  int nq = 1024;                   // base samples
  int fiber_dims = 0;
  std::vector<int> fiber_samples;  // grid points per fiber dimension
  Eigen::VectorXd center;          // fiber window centers
  Eigen::VectorXd radius;          // fiber window half-widths
  Eigen::MatrixXd quad_form;       // Q, the form at infinity
  int index_at_infinity = 0;
  /// S(q; xi) and its gradient (dS/dq, dS/dxi).
  std::function<double(double, const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> gradient;
  std::optional<ChainData> chain;
  std::map<std::string, double> descriptor;  // recorded in manifests
};

struct BraneGF {
  DiscreteGF gf;
  double shift = 0.0;
};

/// Graph GF of a periodic function (no fibers, index 0).
DiscreteGF graph_gf(const Periodic1D& f, int nq = 1024);
DiscreteGF graph_gf(const std::function<double(double)>& f, int nq = 1024);

/// GF of an exact graph curve: Hermite interpolation of its primitive with
/// slope p at the vertices.
DiscreteGF graph_gf_from_curve(const LagrangianCurve& L, int nq = 1024);

struct BrokenGeodesicOptions {
  int nq = 1024;
  int fiber_samples = 32;
  double window_margin = 1.25;
};

/// GF of psi^n applied to the zero section (or to the graph of dg when
/// `start` is given), built from the one-step generating function h:
///   S_n(q; x_0..x_{n-1}) = a^n g(x_0) + sum a^{n-1-i} h(x_i, x_{i+1}), x_n = q.
/// Fiber windows are centered at -(n-i) omega with radius
/// margin * (n-i) * band. Throws MissingPrimitiveStep if h is absent.
DiscreteGF broken_geodesic_gf(const CESMap& map, int n,
                              const std::optional<Periodic1D>& start = std::nullopt,
                              const BrokenGeodesicOptions& opts = {});

/// S1 - S2 on the product of fibers; index i1 + (m2 - i2).
DiscreteGF ominus(const DiscreteGF& s1, const DiscreteGF& s2);
/// S1 + S2 on the product of fibers; index i1 + i2.
DiscreteGF oplus(const DiscreteGF& s1, const DiscreteGF& s2);
DiscreteGF shift_gf(const DiscreteGF& s, double c);
/// S(q; xi) + eta^T R eta with eta in [-radius, radius]^k. Throws
/// InvalidArgument for singular R.
DiscreteGF stabilize(const DiscreteGF& s, const Eigen::MatrixXd& R,
                     double radius = 1.0, int samples = 32);

struct ReductionReport {
  int levels = 0;         // fiber variables eliminated
  bool complete = false;  // result has no fibers left
};

/// Eliminates chain fibers one at a time while each elimination has a unique
/// nondegenerate fiber critical point (a fiberwise minimum), which leaves
/// the spectral invariants unchanged. Non-chain GFs are returned as is.
DiscreteGF reduce(const DiscreteGF& s, ReductionReport* report = nullptr,
                  int nodes = 2048);

/// Points (q, dS/dq, S) of the fiber-critical locus, found at each base
/// sample by Newton on grad_xi S = 0 from a grid of seeds over the window.
struct GeneratedPoint {
  double q;
  double p;
  double value;
  Eigen::VectorXd xi;
};
std::vector<GeneratedPoint> generated_points(const DiscreteGF& s, int base_samples,
                                             int seeds_per_dim = 6);

/// Asymptotic-quadraticity test on the window shell: the largest ratio
///   |d_k S - 2 (Q (xi - c))_k| / |2 (Q (xi - c))_k|
/// over sample points of each face xi_k = c_k +- r_k of the window. Below 1
/// the normal derivative on every face has the sign of the quadratic form,
/// so no fiber critical point can sit on the shell. Returns 0 for GFs without fibers.
double shell_ratio(const DiscreteGF& s, int base_samples = 64, int shell_samples = 16);

/// Index of S: count of negative eigenvalues of the quadratic form.
int count_negative(const Eigen::MatrixXd& Q);

}  // namespace birkhoff
