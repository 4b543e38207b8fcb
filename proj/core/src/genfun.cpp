#include "birkhoff/genfun.hpp"

#include "birkhoff/curve.hpp"
#include "birkhoff/error.hpp"
#include "birkhoff/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace birkhoff {

// ------------------------------------------------------------ Hermite

PeriodicHermite::PeriodicHermite(std::vector<double> x, std::vector<double> f,
                                 std::vector<double> df)
    : x_(std::move(x)), f_(std::move(f)), df_(std::move(df)) {
  if (x_.size() < 2 || f_.size() != x_.size() || df_.size() != x_.size())
    throw Error(ErrorKind::InvalidArgument, "PeriodicHermite: bad node arrays");
  for (std::size_t k = 1; k < x_.size(); ++k)
    if (!(x_[k] > x_[k - 1]))
      throw Error(ErrorKind::InvalidArgument, "PeriodicHermite: nodes must increase");
  if (!(x_.back() < x_.front() + 1.0))
    throw Error(ErrorKind::InvalidArgument, "PeriodicHermite: nodes exceed one period");
}

PeriodicHermite::Segment PeriodicHermite::segment(double x) const {
  const double x0 = x_.front();
  const double y = x0 + (x - x0 - std::floor(x - x0));
  auto it = std::upper_bound(x_.begin(), x_.end(), y);
  const std::size_t k =
      std::min(static_cast<std::size_t>(it - x_.begin()) - 1, x_.size() - 1);
  const std::size_t k1 = (k + 1) % x_.size();
  const double xr = k + 1 < x_.size() ? x_[k + 1] : x0 + 1.0;
  const double h = xr - x_[k];
  return {h, f_[k], f_[k1], df_[k], df_[k1], (y - x_[k]) / h};
}

double PeriodicHermite::value(double x) const {
  const Segment s = segment(x);
  const double t = s.t, t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * s.f0 + (t3 - 2 * t2 + t) * s.h * s.d0 +
         (-2 * t3 + 3 * t2) * s.f1 + (t3 - t2) * s.h * s.d1;
}

double PeriodicHermite::slope(double x) const {
  const Segment s = segment(x);
  const double t = s.t, t2 = t * t;
  return ((6 * t2 - 6 * t) * s.f0 + (-6 * t2 + 6 * t) * s.f1) / s.h +
         (3 * t2 - 4 * t + 1) * s.d0 + (3 * t2 - 2 * t) * s.d1;
}

double PeriodicHermite::curvature(double x) const {
  const Segment s = segment(x);
  const double t = s.t;
  return ((12 * t - 6) * s.f0 + (-12 * t + 6) * s.f1) / (s.h * s.h) +
         ((6 * t - 4) * s.d0 + (6 * t - 2) * s.d1) / s.h;
}

Periodic1D PeriodicHermite::as_function() const {
  auto self = std::make_shared<PeriodicHermite>(*this);
  return {[self](double x) { return self->value(x); },
          [self](double x) { return self->slope(x); },
          [self](double x) { return self->curvature(x); }};
}

// ------------------------------------------------------------ helpers

int count_negative(const Eigen::MatrixXd& Q) {
  if (Q.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (Q + Q.transpose()));
  int n = 0;
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k)
    if (eig.eigenvalues()(k) < 0) ++n;
  return n;
}

namespace {

Periodic1D complete(const Periodic1D& f) {
  Periodic1D out = f;
  if (!out.value) throw Error(ErrorKind::InvalidArgument, "function has no value");
  if (!out.slope) {
    auto v = out.value;
    out.slope = [v](double x) {
      const double h = 1e-5;
      return (8 * (v(x + h) - v(x - h)) - (v(x + 2 * h) - v(x - 2 * h))) / (12 * h);
    };
  }
  if (!out.curvature) {
    auto d = out.slope;
    out.curvature = [d](double x) {
      const double h = 1e-5;
      return (d(x + h) - d(x - h)) / (2 * h);
    };
  }
  return out;
}

Periodic1D zero_function() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; },
          [](double) { return 0.0; }};
}

DiscreteGF make_graph(const Periodic1D& f, int nq, std::string family) {
  DiscreteGF gf;
  gf.family = std::move(family);
  gf.nq = nq;
  gf.fiber_dims = 0;
  gf.center = Eigen::VectorXd(0);
  gf.radius = Eigen::VectorXd(0);
  gf.quad_form = Eigen::MatrixXd(0, 0);
  gf.index_at_infinity = 0;
  auto v = f.value;
  auto d = f.slope;
  gf.value = [v](double q, const Eigen::VectorXd&) { return v(q); };
  gf.gradient = [d](double q, const Eigen::VectorXd&) {
    Eigen::VectorXd g(1);
    g(0) = d(q);
    return g;
  };
  return gf;
}

DiscreteGF make_chain_gf(const ChainData& c, int nq, int fiber_samples, double margin) {
  const int m = c.steps;
  if (m == 0) {
    const double off = c.offset;
    Periodic1D f = c.bottom;
    Periodic1D shifted{[f, off](double x) { return f.value(x) + off; }, f.slope, f.curvature};
    DiscreteGF gf = make_graph(shifted, nq, "broken_geodesic");
    gf.chain = c;
    gf.descriptor = {{"a", c.a}, {"steps", 0}, {"reduced_levels", c.reduced_levels}};
    return gf;
  }
  DiscreteGF gf;
  gf.family = "broken_geodesic";
  gf.nq = nq;
  gf.fiber_dims = m;
  gf.fiber_samples.assign(static_cast<std::size_t>(m), fiber_samples);
  gf.center.resize(m);
  gf.radius.resize(m);
  for (int i = 0; i < m; ++i) {
    gf.center(i) = -(m - i) * c.h.drift;
    gf.radius(i) = margin * (m - i) * c.band;
  }
  // Quadratic part sum w_i s (x_{i+1} - x_i - drift)^2 / 2 with x_m = q fixed.
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const double w = 0.5 * c.h.stiffness * std::pow(c.a, m - 1 - i);
    Q(i, i) += w;
    if (i + 1 < m) {
      Q(i + 1, i + 1) += w;
      Q(i, i + 1) -= w;
      Q(i + 1, i) -= w;
    }
  }
  gf.quad_form = Q;
  gf.index_at_infinity = count_negative(Q);
  gf.chain = c;
  gf.value = [c, m](double q, const Eigen::VectorXd& xi) {
    double s = std::pow(c.a, m) * c.bottom.value(q + xi(0)) + c.offset;
    for (int i = 0; i < m; ++i) {
      const double x = q + xi(i);
      const double X = i + 1 < m ? q + xi(i + 1) : q;
      s += std::pow(c.a, m - 1 - i) * c.h.value(x, X);
    }
    return s;
  };
  gf.gradient = [c, m](double q, const Eigen::VectorXd& xi) {
    // Partial derivatives in x_0..x_m, then chain rule to (q, xi).
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(m + 1);
    dx(0) += std::pow(c.a, m) * c.bottom.slope(q + xi(0));
    for (int i = 0; i < m; ++i) {
      const double x = q + xi(i);
      const double X = i + 1 < m ? q + xi(i + 1) : q;
      const double w = std::pow(c.a, m - 1 - i);
      dx(i) += w * c.h.d1(x, X);
      dx(i + 1) += w * c.h.d2(x, X);
    }
    Eigen::VectorXd g(m + 1);
    g(0) = dx.sum();
    g.tail(m) = dx.head(m);
    return g;
  };
  gf.descriptor = {{"a", c.a}, {"steps", m}, {"reduced_levels", c.reduced_levels},
                   {"band", c.band}, {"drift", c.h.drift}};
  return gf;
}

}  // namespace

// ------------------------------------------------------------ constructors

DiscreteGF graph_gf(const Periodic1D& f, int nq) {
  if (nq < 4) throw Error(ErrorKind::InvalidArgument, "graph_gf: nq too small");
  DiscreteGF gf = make_graph(complete(f), nq, "graph");
  return gf;
}

DiscreteGF graph_gf(const std::function<double(double)>& f, int nq) {
  return graph_gf(Periodic1D{f, nullptr, nullptr}, nq);
}

DiscreteGF graph_gf_from_curve(const LagrangianCurve& L, int nq) {
  if (!is_graph(L))
    throw Error(ErrorKind::InvalidArgument, "graph_gf_from_curve: curve is not a graph");
  const double area = signed_area(L);
  if (std::abs(area) > 1e-7)
    throw Error(ErrorKind::NotExact, "graph_gf_from_curve: curve is not exact");
  std::vector<double> x, f, df;
  for (std::size_t i = 0; i < L.size(); ++i) {
    x.push_back(L.vertices[i].x);
    f.push_back(L.primitive[i]);
    df.push_back(L.vertices[i].p);
  }
  PeriodicHermite H(std::move(x), std::move(f), std::move(df));
  DiscreteGF gf = make_graph(H.as_function(), nq, "curve_graph");
  gf.descriptor = {{"vertices", static_cast<double>(L.size())}};
  return gf;
}

DiscreteGF broken_geodesic_gf(const CESMap& map, int n,
                              const std::optional<Periodic1D>& start,
                              const BrokenGeodesicOptions& opts) {
  if (!map.primitive_step)
    throw Error(ErrorKind::MissingPrimitiveStep,
                "broken_geodesic_gf: map " + map.name + " has no one-step generating function");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "broken_geodesic_gf: n must be >= 1");
  ChainData c;
  c.a = map.a;
  c.steps = n;
  c.h = *map.primitive_step;
  c.bottom = start ? complete(*start) : zero_function();

  // A priori bound on |p| along the orbits that matter: the trapping band,
  // widened by what sampled orbits of the starting graph actually reach.
  double band = std::isfinite(map.trapping_band) ? map.trapping_band : 0.0;
  for (int k = 0; k < 256; ++k) {
    LiftedPoint z{k / 256.0, c.bottom.slope(k / 256.0)};
    band = std::max(band, std::abs(z.p));
    for (int j = 0; j < n; ++j) {
      z = map.forward(z);
      band = std::max(band, std::abs(z.p));
    }
  }
  c.band = band;
  DiscreteGF gf = make_chain_gf(c, opts.nq, opts.fiber_samples, opts.window_margin);
  gf.descriptor["n"] = n;
  gf.descriptor["window_margin"] = opts.window_margin;
  for (const auto& [k, v] : map.params) gf.descriptor["map." + k] = v;
  return gf;
}

// ------------------------------------------------------------ algebra

namespace {

Eigen::MatrixXd block_diag(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  M.topLeftCorner(A.rows(), A.cols()) = A;
  M.bottomRightCorner(B.rows(), B.cols()) = B;
  return M;
}

Eigen::VectorXd concat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd v(a.size() + b.size());
  v << a, b;
  return v;
}

DiscreteGF combine(const DiscreteGF& s1, const DiscreteGF& s2, double sign,
                   std::string family) {
  if (s1.nq != s2.nq)
    throw Error(ErrorKind::GridMismatch, "GF algebra needs equal base sampling");
  DiscreteGF out;
  out.family = std::move(family);
  out.nq = s1.nq;
  out.fiber_dims = s1.fiber_dims + s2.fiber_dims;
  out.fiber_samples = s1.fiber_samples;
  out.fiber_samples.insert(out.fiber_samples.end(), s2.fiber_samples.begin(),
                           s2.fiber_samples.end());
  out.center = concat(s1.center, s2.center);
  out.radius = concat(s1.radius, s2.radius);
  out.quad_form = block_diag(s1.quad_form, sign * s2.quad_form);
  out.index_at_infinity = sign > 0 ? s1.index_at_infinity + s2.index_at_infinity
                                   : s1.index_at_infinity +
                                         (s2.fiber_dims - s2.index_at_infinity);
  const int m1 = s1.fiber_dims, m2 = s2.fiber_dims;
  auto v1 = s1.value, v2 = s2.value;
  auto g1 = s1.gradient, g2 = s2.gradient;
  out.value = [=](double q, const Eigen::VectorXd& xi) {
    return v1(q, xi.head(m1)) + sign * v2(q, xi.tail(m2));
  };
  out.gradient = [=](double q, const Eigen::VectorXd& xi) {
    const Eigen::VectorXd a = g1(q, xi.head(m1)), b = g2(q, xi.tail(m2));
    Eigen::VectorXd g(1 + m1 + m2);
    g(0) = a(0) + sign * b(0);
    g.segment(1, m1) = a.tail(m1);
    g.tail(m2) = sign * b.tail(m2);
    return g;
  };
  return out;
}

}  // namespace

DiscreteGF ominus(const DiscreteGF& s1, const DiscreteGF& s2) {
  return combine(s1, s2, -1.0, "ominus");
}

DiscreteGF oplus(const DiscreteGF& s1, const DiscreteGF& s2) {
  return combine(s1, s2, 1.0, "oplus");
}

DiscreteGF shift_gf(const DiscreteGF& s, double c) {
  DiscreteGF out = s;
  auto v = s.value;
  out.value = [v, c](double q, const Eigen::VectorXd& xi) { return v(q, xi) + c; };
  if (out.chain) out.chain->offset += c;
  out.descriptor["shift"] += c;
  return out;
}

DiscreteGF stabilize(const DiscreteGF& s, const Eigen::MatrixXd& R, double radius,
                     int samples) {
  if (R.rows() != R.cols() || R.rows() == 0)
    throw Error(ErrorKind::InvalidArgument, "stabilize: R must be square");
  const Eigen::MatrixXd Rs = 0.5 * (R + R.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Rs);
  if (eig.eigenvalues().cwiseAbs().minCoeff() < 1e-12)
    throw Error(ErrorKind::InvalidArgument, "stabilize: R is degenerate");
  const auto k = static_cast<int>(R.rows());
  DiscreteGF out;
  out.family = s.family + "+stab";
  out.nq = s.nq;
  out.fiber_dims = s.fiber_dims + k;
  out.fiber_samples = s.fiber_samples;
  out.fiber_samples.insert(out.fiber_samples.end(), static_cast<std::size_t>(k), samples);
  out.center = concat(s.center, Eigen::VectorXd::Zero(k));
  out.radius = concat(s.radius, Eigen::VectorXd::Constant(k, radius));
  out.quad_form = block_diag(s.quad_form, Rs);
  out.index_at_infinity = s.index_at_infinity + count_negative(Rs);
  out.descriptor = s.descriptor;
  out.descriptor["stabilized_dims"] += k;
  const int m = s.fiber_dims;
  auto v = s.value;
  auto g = s.gradient;
  out.value = [=](double q, const Eigen::VectorXd& xi) {
    const Eigen::VectorXd eta = xi.tail(k);
    return v(q, xi.head(m)) + eta.dot(Rs * eta);
  };
  out.gradient = [=](double q, const Eigen::VectorXd& xi) {
    const Eigen::VectorXd eta = xi.tail(k);
    Eigen::VectorXd out_g(1 + m + k);
    out_g.head(1 + m) = g(q, xi.head(m));
    out_g.tail(k) = 2.0 * Rs * eta;
    return out_g;
  };
  return out;
}

// ------------------------------------------------------------ reduction

namespace {

// Eliminates x_0 from the chain: G'(X) = crit_x [a G(x) + h(x, X)].
// Returns nothing when some X has no unique nondegenerate minimum.
std::optional<PeriodicHermite> eliminate(const ChainData& c, int nodes, double margin) {
  std::vector<double> X(static_cast<std::size_t>(nodes)), G(X.size()), dG(X.size()),
      xs(X.size());
  std::vector<int> ok(X.size(), 1);
  const double a = c.a;
  const double half = margin * c.band;
  parallel_for(0, X.size(), [&](std::size_t k) {
    const double Xk = static_cast<double>(k) / nodes;
    X[k] = Xk;
    auto phi = [&](double x) { return a * c.bottom.slope(x) + c.h.d1(x, Xk); };
    auto dphi = [&](double x) { return a * c.bottom.curvature(x) + c.h.d11(x, Xk); };
    const double lo = Xk - c.h.drift - half, hi = Xk - c.h.drift + half;
    constexpr int scan = 512;
    int changes = 0;
    double bl = lo, br = hi;
    double prev = phi(lo);
    if (!(prev < 0.0)) {
      ok[k] = 0;
      return;
    }
    for (int s = 1; s <= scan; ++s) {
      const double x = lo + (hi - lo) * s / scan;
      const double v = phi(x);
      if ((prev < 0.0) != (v < 0.0)) {
        ++changes;
        bl = lo + (hi - lo) * (s - 1) / scan;
        br = x;
      }
      prev = v;
    }
    if (changes != 1 || !(prev > 0.0)) {
      ok[k] = 0;
      return;
    }
    // Safeguarded Newton inside the bracket.
    double x = 0.5 * (bl + br);
    for (int it = 0; it < 100; ++it) {
      const double v = phi(x);
      if (v < 0.0) bl = x; else br = x;
      const double d = dphi(x);
      double nx = d > 0.0 ? x - v / d : 0.5 * (bl + br);
      if (!(nx > bl && nx < br)) nx = 0.5 * (bl + br);
      if (std::abs(nx - x) < 1e-15 * (1.0 + std::abs(x))) {
        x = nx;
        break;
      }
      x = nx;
    }
    if (!(dphi(x) > 1e-9)) {
      ok[k] = 0;
      return;
    }
    xs[k] = x;
    G[k] = a * c.bottom.value(x) + c.h.value(x, Xk);
    dG[k] = c.h.d2(x, Xk);
  });
  for (std::size_t k = 0; k < X.size(); ++k)
    if (!ok[k]) return std::nullopt;
  // The minimizer must move monotonically with X, otherwise the image curve
  // folds between nodes.
  for (std::size_t k = 1; k < X.size(); ++k)
    if (!(xs[k] > xs[k - 1])) return std::nullopt;
  if (!(xs.front() + 1.0 > xs.back())) return std::nullopt;
  return PeriodicHermite(std::move(X), std::move(G), std::move(dG));
}

}  // namespace

DiscreteGF reduce(const DiscreteGF& s, ReductionReport* report, int nodes) {
  ReductionReport rep;
  if (!s.chain || s.chain->steps == 0) {
    rep.complete = s.fiber_dims == 0;
    if (report) *report = rep;
    return s;
  }
  ChainData c = *s.chain;
  const double margin = s.descriptor.count("window_margin") ? s.descriptor.at("window_margin") : 1.25;
  const int samples = s.fiber_samples.empty() ? 32 : s.fiber_samples.front();
  bool changed = false;
  while (c.steps > 0) {
    auto next = eliminate(c, nodes, margin);
    if (!next) break;
    c.bottom = next->as_function();
    c.steps -= 1;
    c.reduced_levels += 1;
    rep.levels += 1;
    changed = true;
  }
  if (!changed) {
    if (report) *report = rep;
    return s;
  }
  DiscreteGF out = make_chain_gf(c, s.nq, samples, margin);
  for (const auto& [k, v] : s.descriptor)
    if (!out.descriptor.count(k)) out.descriptor[k] = v;
  rep.complete = c.steps == 0;
  if (report) *report = rep;
  return out;
}

// ------------------------------------------------------------ diagnostics

namespace {

Eigen::MatrixXd fiber_hessian(const DiscreteGF& s, double q, const Eigen::VectorXd& xi) {
  const int m = s.fiber_dims;
  Eigen::MatrixXd H(m, m);
  for (int j = 0; j < m; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(xi(j)));
    Eigen::VectorXd a = xi, b = xi;
    a(j) += h;
    b(j) -= h;
    H.col(j) = (s.gradient(q, a).tail(m) - s.gradient(q, b).tail(m)) / (2 * h);
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace

std::vector<GeneratedPoint> generated_points(const DiscreteGF& s, int base_samples,
                                             int seeds_per_dim) {
  std::vector<std::vector<GeneratedPoint>> per(static_cast<std::size_t>(base_samples));
  const int m = s.fiber_dims;
  parallel_for(0, per.size(), [&](std::size_t b) {
    const double q = static_cast<double>(b) / base_samples;
    auto& out = per[b];
    if (m == 0) {
      const Eigen::VectorXd none(0);
      out.push_back({q, s.gradient(q, none)(0), s.value(q, none), none});
      return;
    }
    long total = 1;
    for (int d = 0; d < m; ++d) total *= seeds_per_dim;
    for (long idx = 0; idx < total; ++idx) {
      Eigen::VectorXd xi(m);
      long r = idx;
      for (int d = 0; d < m; ++d) {
        const int k = static_cast<int>(r % seeds_per_dim);
        r /= seeds_per_dim;
        xi(d) = s.center(d) - s.radius(d) + 2.0 * s.radius(d) * (k + 0.5) / seeds_per_dim;
      }
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        const Eigen::VectorXd g = s.gradient(q, xi).tail(m);
        if (g.norm() < 1e-12) {
          converged = true;
          break;
        }
        const Eigen::VectorXd step = fiber_hessian(s, q, xi).fullPivLu().solve(g);
        xi -= step;
        if (!xi.allFinite()) break;
        if (step.norm() < 1e-14) {
          converged = s.gradient(q, xi).tail(m).norm() < 1e-9;
          break;
        }
      }
      if (!converged) continue;
      bool inside = true;
      for (int d = 0; d < m; ++d)
        if (std::abs(xi(d) - s.center(d)) > s.radius(d)) inside = false;
      if (!inside) continue;
      bool duplicate = false;
      for (const auto& p : out)
        if ((p.xi - xi).norm() < 1e-7) duplicate = true;
      if (duplicate) continue;
      out.push_back({q, s.gradient(q, xi)(0), s.value(q, xi), xi});
    }
  });
  std::vector<GeneratedPoint> all;
  for (auto& v : per) all.insert(all.end(), v.begin(), v.end());
  return all;
}

double shell_ratio(const DiscreteGF& s, int base_samples, int shell_samples) {
  const int m = s.fiber_dims;
  if (m == 0) return 0.0;
  double worst = 0.0;
  for (int b = 0; b < base_samples; ++b) {
    const double q = static_cast<double>(b) / base_samples;
    for (int face = 0; face < m; ++face) {
      for (int side : {-1, 1}) {
        long total = 1;
        for (int d = 0; d + 1 < m; ++d) total *= shell_samples;
        for (long idx = 0; idx < total; ++idx) {
          Eigen::VectorXd v(m);
          long r = idx;
          for (int d = 0; d < m; ++d) {
            if (d == face) {
              v(d) = side * s.radius(d);
              continue;
            }
            const int k = static_cast<int>(r % shell_samples);
            r /= shell_samples;
            v(d) = s.radius(d) * (-1.0 + 2.0 * (k + 0.5) / shell_samples);
          }
          const Eigen::VectorXd xi = s.center + v;
          const Eigen::VectorXd quad = 2.0 * s.quad_form * v;
          const Eigen::VectorXd pert = s.gradient(q, xi).tail(m) - quad;
          const double qn = std::abs(quad(face));
          worst = std::max(worst, qn > 0.0 ? std::abs(pert(face)) / qn
                                           : std::numeric_limits<double>::infinity());
        }
      }
    }
  }
  return worst;
}

}  // namespace birkhoff
