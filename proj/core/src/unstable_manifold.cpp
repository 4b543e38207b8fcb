#include "birkhoff/unstable_manifold.hpp"

#include "birkhoff/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace birkhoff {

UnstableManifold unstable_manifold(const CESMap& map, AnnulusPoint saddle,
                                   double arc_budget, const ManifoldOptions& opts) {
  const LiftedPoint s = lift(saddle);
  const LiftedPoint fs = map.forward(s);
  if (std::abs(fs.p - s.p) > 1e-8 || circle_distance(fs.x, s.x) > 1e-8)
    throw Error(ErrorKind::NotHyperbolic, "unstable_manifold: point is not fixed");

  const Eigen::Matrix2d J = jacobian(map, s, 1e-4);
  Eigen::EigenSolver<Eigen::Matrix2d> eig(J);
  const auto values = eig.eigenvalues();
  constexpr double tol = 1e-6;
  if (std::abs(values(0).imag()) > tol || std::abs(values(1).imag()) > tol)
    throw Error(ErrorKind::NotHyperbolic, "unstable_manifold: complex eigenvalues");
  int u = std::abs(values(0).real()) > std::abs(values(1).real()) ? 0 : 1;
  const double lu = values(u).real(), ls = values(1 - u).real();
  if (!(std::abs(ls) < 1.0 - tol && std::abs(lu) > 1.0 + tol))
    throw Error(ErrorKind::NotHyperbolic,
                "unstable_manifold: eigenvalues do not straddle the unit circle");

  UnstableManifold w;
  w.saddle = s;
  w.lambda_u = lu;
  w.lambda_s = ls;
  w.eigenvector = eig.eigenvectors().col(u).real().normalized();

  // Orientation-reversing saddles alternate sides, so grow with psi^2.
  const bool square = lu < 0.0;
  const double growth = square ? lu * lu : lu;
  auto step = [&](LiftedPoint z) {
    z = map.forward(z);
    return square ? map.forward(z) : z;
  };
  auto gap = [](LiftedPoint a, LiftedPoint b) { return std::hypot(a.x - b.x, a.p - b.p); };

  std::size_t total_points = 0;
  for (int side : {1, -1}) {
    std::vector<LiftedPoint> segment;
    for (int k = 0; k <= opts.fundamental_points; ++k) {
      const double r = opts.seed_distance *
                       std::pow(growth, static_cast<double>(k) / opts.fundamental_points);
      segment.push_back({s.x + side * r * w.eigenvector(0), s.p + side * r * w.eigenvector(1)});
    }
    std::vector<LiftedPoint> branch = segment;
    double length = 0.0;
    for (std::size_t k = 1; k < branch.size(); ++k) length += gap(branch[k - 1], branch[k]);

    for (int it = 0; it < opts.max_iterations && length < 0.5 * arc_budget; ++it) {
      // Image of the previous segment, with bisection of preimage chords
      // wherever consecutive images are too far apart.
      std::vector<LiftedPoint> next{step(segment.front())};
      std::vector<LiftedPoint> pre{segment.front()};
      for (std::size_t k = 1; k < segment.size(); ++k) {
        LiftedPoint a = segment[k - 1];
        LiftedPoint fa = next.back();
        std::vector<std::pair<LiftedPoint, LiftedPoint>> stack{{segment[k], step(segment[k])}};
        while (!stack.empty()) {
          auto [b, fb] = stack.back();
          if (gap(fa, fb) > opts.spacing && gap(a, b) > 1e-14) {
            const LiftedPoint m{0.5 * (a.x + b.x), 0.5 * (a.p + b.p)};
            stack.push_back({m, step(m)});
            continue;
          }
          stack.pop_back();
          next.push_back(fb);
          pre.push_back(b);
          a = b;
          fa = fb;
        }
      }
      double seg_length = 0.0;
      for (std::size_t k = 1; k < next.size(); ++k) seg_length += gap(next[k - 1], next[k]);
      total_points += next.size();
      if (total_points > opts.max_points)
        throw Error(ErrorKind::CurveComplexityOverflow,
                    "unstable_manifold: point budget exceeded");
      branch.insert(branch.end(), next.begin() + 1, next.end());
      length += seg_length;
      segment = std::move(next);
      if (seg_length < opts.min_segment) break;
    }
    w.arc_length += length;
    w.branches.push_back(std::move(branch));
  }
  return w;
}

std::vector<AnnulusPoint> manifold_points(const UnstableManifold& w) {
  std::vector<AnnulusPoint> out{project(w.saddle)};
  for (const auto& b : w.branches)
    for (const auto& z : b) out.push_back(project(z));
  return out;
}

}  // namespace birkhoff
