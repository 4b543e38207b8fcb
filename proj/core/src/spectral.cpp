#include "birkhoff/spectral.hpp"

#include "birkhoff/error.hpp"
#include "birkhoff/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace birkhoff {

const char* to_string(CohomologyClass cls) {
  return cls == CohomologyClass::PointClass ? "point" : "fundamental";
}

double SpectralPair::c() const { return std::max(c_plus, 0.0) - std::min(c_minus, 0.0); }

namespace {

double fiber_node(const DiscreteGF& s, int j, int k) {
  const int n = s.fiber_samples[static_cast<std::size_t>(j)];
  const double c = s.center(j), r = s.radius(j);
  return n == 1 ? c : c - r + 2.0 * r * k / (n - 1);
}

// Shell level: value of the negative part of Q at 90% of the window,
// measured along its weakest negative eigendirection.
std::vector<std::uint8_t> negative_shell(const DiscreteGF& s, const CubicalGrid& grid) {
  const int m = s.fiber_dims;
  const Eigen::MatrixXd Q = 0.5 * (s.quad_form + s.quad_form.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q);
  double kappa = std::numeric_limits<double>::infinity();
  for (int e = 0; e < m; ++e) {
    const double lam = eig.eigenvalues()(e);
    if (lam >= 0.0) continue;
    const Eigen::VectorXd v = eig.eigenvectors().col(e);
    double reach = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j)
      if (std::abs(v(j)) > 1e-14) reach = std::min(reach, s.radius(j) / std::abs(v(j)));
    kappa = std::min(kappa, 0.81 * -lam * reach * reach);
  }
  const std::size_t nv = grid.vertex_count();
  std::vector<std::uint8_t> shell(nv, 0);
  parallel_for(0, nv, [&](std::size_t v) {
    Eigen::VectorXd xi(m);
    std::size_t rem = v / static_cast<std::size_t>(grid.sizes[0]);
    for (int j = 0; j < m; ++j) {
      const auto n = static_cast<std::size_t>(grid.sizes[static_cast<std::size_t>(j) + 1]);
      xi(j) = fiber_node(s, j, static_cast<int>(rem % n)) - s.center(j);
      rem /= n;
    }
    shell[v] = xi.dot(Q * xi) <= -kappa ? 1 : 0;
  });
  return shell;
}

struct Critical {
  double value;
  bool ok;
};

// Newton on the full gradient from a grid vertex, with a central-difference
// Hessian. Accepted only when it stays within a few grid spacings.
Critical polish(const DiscreteGF& s, const Eigen::VectorXd& z0) {
  const int dim = 1 + s.fiber_dims;
  Eigen::VectorXd spacing(dim);
  spacing(0) = 1.0 / s.nq;
  for (int j = 0; j < s.fiber_dims; ++j) {
    const int n = s.fiber_samples[static_cast<std::size_t>(j)];
    spacing(j + 1) = n > 1 ? 2.0 * s.radius(j) / (n - 1) : 1.0;
  }
  auto grad = [&](const Eigen::VectorXd& z) { return s.gradient(z(0), z.tail(dim - 1)); };
  Eigen::VectorXd z = z0;
  for (int it = 0; it < 40; ++it) {
    const Eigen::VectorXd g = grad(z);
    if (!g.allFinite()) return {0.0, false};
    if (g.norm() < 1e-12) break;
    Eigen::MatrixXd H(dim, dim);
    for (int j = 0; j < dim; ++j) {
      const double h = 1e-4 * spacing(j);
      Eigen::VectorXd zp = z, zm = z;
      zp(j) += h;
      zm(j) -= h;
      H.col(j) = (grad(zp) - grad(zm)) / (2.0 * h);
    }
    H = 0.5 * (H + H.transpose());
    const Eigen::VectorXd step = H.fullPivLu().solve(g);
    if (!step.allFinite()) return {0.0, false};
    z -= step;
    if (((z - z0).cwiseQuotient(spacing)).cwiseAbs().maxCoeff() > 8.0) return {0.0, false};
    if (step.cwiseQuotient(spacing).cwiseAbs().maxCoeff() < 1e-10) break;
  }
  if (grad(z).norm() > 1e-8) return {0.0, false};
  return {s.value(z(0), z.tail(dim - 1)), true};
}

}  // namespace

SampledGF sample_gf(const DiscreteGF& s, std::size_t max_vertices) {
  SampledGF out;
  out.grid.sizes.push_back(s.nq);
  out.grid.periodic.push_back(true);
  for (int j = 0; j < s.fiber_dims; ++j) {
    out.grid.sizes.push_back(s.fiber_samples[static_cast<std::size_t>(j)]);
    out.grid.periodic.push_back(false);
  }
  const std::size_t nv = out.grid.vertex_count();
  if (nv > max_vertices)
    throw Error(ErrorKind::BackendLimit, "sampled GF exceeds the vertex budget");
  out.values.resize(nv);
  parallel_for(0, nv, [&](std::size_t v) {
    const Eigen::VectorXd z = vertex_coordinates(s, v);
    out.values[v] = s.value(z(0), z.tail(s.fiber_dims));
  });
  if (s.index_at_infinity > 0) out.shell = negative_shell(s, out.grid);
  return out;
}

Eigen::VectorXd vertex_coordinates(const DiscreteGF& s, std::size_t vertex) {
  Eigen::VectorXd z(1 + s.fiber_dims);
  const auto nq = static_cast<std::size_t>(s.nq);
  z(0) = static_cast<double>(vertex % nq) / s.nq;
  std::size_t rem = vertex / nq;
  for (int j = 0; j < s.fiber_dims; ++j) {
    const auto n = static_cast<std::size_t>(s.fiber_samples[static_cast<std::size_t>(j)]);
    z(j + 1) = fiber_node(s, j, static_cast<int>(rem % n));
    rem /= n;
  }
  return z;
}

SpectralValue c_invariant(const DiscreteGF& s, CohomologyClass cls, const SpectralOptions& opts) {
  if (s.nq < 3 || static_cast<int>(s.fiber_samples.size()) != s.fiber_dims)
    throw Error(ErrorKind::InvalidArgument, "c_invariant: malformed GF");
  const SampledGF sg = sample_gf(s, opts.max_vertices);
  const int shift = cls == CohomologyClass::PointClass ? 0 : 1;
  SpectralValue out;
  out.degree = s.index_at_infinity + shift;
  std::size_t vertex = 0;
  if (s.index_at_infinity == 0 && !opts.force_persistence) {
    const SublevelEvent ev = shift == 0 ? minimum_vertex(sg.values)
                                        : odd_cycle_birth(sg.grid, sg.values);
    out.raw = ev.value;
    vertex = ev.vertex;
    out.method = "fastpath";
  } else {
    if (s.fiber_dims > 2)
      throw Error(ErrorKind::BackendLimit,
                  "persistence backend supports at most two fiber dimensions");
    const PersistenceResult pr = lower_star_persistence(sg.grid, sg.values, sg.shell);
    int found = 0;
    for (const auto& bar : pr.essential) {
      if (bar.degree != s.index_at_infinity && bar.degree != s.index_at_infinity + 1)
        throw Error(ErrorKind::EssentialClassNotFound,
                    "unexpected essential class in degree " + std::to_string(bar.degree));
      if (bar.degree == out.degree) {
        out.raw = bar.birth;
        vertex = bar.vertex;
        ++found;
      }
    }
    if (found != 1 || pr.essential.size() != 2)
      throw Error(ErrorKind::EssentialClassNotFound,
                  "expected one essential class in degrees i and i+1");
    out.method = "persistence";
  }
  out.polished = out.raw;
  if (opts.polish) {
    const Critical c = polish(s, vertex_coordinates(s, vertex));
    // The grid minimum bounds the true minimum from above, and for graphs the
    // grid maximum bounds the true maximum from below.
    bool accept = c.ok;
    if (accept && s.index_at_infinity == 0 && shift == 0) accept = c.value <= out.raw;
    if (accept && s.fiber_dims == 0 && shift == 1) accept = c.value >= out.raw;
    if (accept) out.polished = c.value;
  }
  return out;
}

namespace {

DiscreteGF prepared(const BraneGF& l) {
  DiscreteGF g = l.gf.chain ? reduce(l.gf) : l.gf;
  return l.shift != 0.0 ? shift_gf(g, l.shift) : g;
}

}  // namespace

SpectralPair spectral_pair(const BraneGF& l1, const BraneGF& l2, const SpectralOptions& opts) {
  const DiscreteGF d = ominus(prepared(l2), prepared(l1));
  const SpectralValue lo = c_invariant(d, CohomologyClass::PointClass, opts);
  const SpectralValue hi = c_invariant(d, CohomologyClass::FundamentalClass, opts);
  SpectralPair out;
  out.c_minus = lo.polished;
  out.c_plus = hi.polished;
  out.c_minus_raw = lo.raw;
  out.c_plus_raw = hi.raw;
  out.method = lo.method == hi.method ? lo.method : lo.method + "+" + hi.method;
  return out;
}

double gamma_distance(const BraneGF& l1, const BraneGF& l2, const SpectralOptions& opts) {
  return spectral_pair(l1, l2, opts).gamma();
}

double c_distance(const BraneGF& l1, const BraneGF& l2, const SpectralOptions& opts) {
  return spectral_pair(l1, l2, opts).c();
}

double gamma_by_shift_infimum(const BraneGF& l1, const BraneGF& l2, const SpectralOptions& opts) {
  const DiscreteGF d = ominus(prepared(l2), prepared(l1));
  auto c_of = [&](double a) {
    const DiscreteGF da = shift_gf(d, -a);
    const double lo = c_invariant(da, CohomologyClass::PointClass, opts).polished;
    const double hi = c_invariant(da, CohomologyClass::FundamentalClass, opts).polished;
    return std::max(hi, 0.0) - std::min(lo, 0.0);
  };
  // c(a) is convex and piecewise linear in a; bracket it by the sample range.
  const SampledGF sg = sample_gf(d, opts.max_vertices);
  const auto [mn, mx] = std::minmax_element(sg.values.begin(), sg.values.end());
  double lo = *mn - 1.0, hi = *mx + 1.0;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = c_of(x1), f2 = c_of(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = c_of(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = c_of(x2);
    }
  }
  return std::min(f1, f2);
}

}  // namespace birkhoff
