#pragma once

// Reference computations shared by the tests. They deliberately avoid the
// library code paths they are compared against.

#include <birkhoff/annulus.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// f(q) = sum_h a_h cos(2 pi h q) + b_h sin(2 pi h q) with closed-form derivatives.
struct Trig {
  std::vector<double> a, b;

  double operator()(double q) const { return eval(q, 0); }
  double d1(double q) const { return eval(q, 1); }
  double d2(double q) const { return eval(q, 2); }

  double eval(double q, int order) const {
    double s = 0.0;
    for (std::size_t h = 0; h < a.size(); ++h) {
      const double w = 2.0 * M_PI * static_cast<double>(h + 1);
      const double c = std::cos(w * q), si = std::sin(w * q);
      switch (order) {
        case 0: s += a[h] * c + b[h] * si; break;
        case 1: s += w * (-a[h] * si + b[h] * c); break;
        default: s += -w * w * (a[h] * c + b[h] * si); break;
      }
    }
    return s;
  }
};

inline Trig random_trig(std::mt19937_64& rng, int max_harmonics = 5, double scale = 1.0) {
  std::uniform_int_distribution<int> modes(1, max_harmonics);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Trig t;
  const int m = modes(rng);
  for (int h = 1; h <= m; ++h) {
    t.a.push_back(scale * u(rng) / h);
    t.b.push_back(scale * u(rng) / h);
  }
  return t;
}

/// Extremes of a smooth periodic function: dense scan, then golden-section
/// refinement around the best sample.
inline std::pair<double, double> extremes(const std::function<double(double)>& f, int n = 1 << 16) {
  double lo = 1e300, hi = -1e300;
  int ilo = 0, ihi = 0;
  for (int i = 0; i < n; ++i) {
    const double v = f(static_cast<double>(i) / n);
    if (v < lo) lo = v, ilo = i;
    if (v > hi) hi = v, ihi = i;
  }
  auto golden = [&](int i, double sign) {
    double l = (i - 1.0) / n, r = (i + 1.0) / n;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int k = 0; k < 60; ++k) {
      const double m1 = r - g * (r - l), m2 = l + g * (r - l);
      if (sign * f(m1) < sign * f(m2)) r = m2; else l = m1;
    }
    return f(0.5 * (l + r));
  };
  return {std::min(lo, golden(ilo, 1.0)), std::max(hi, golden(ihi, -1.0))};
}

inline double oscillation(const std::function<double(double)>& f) {
  const auto [lo, hi] = extremes(f);
  return hi - lo;
}

/// O(N M) Hausdorff distance with the circle metric in q.
inline double hausdorff(const std::vector<birkhoff::AnnulusPoint>& A,
                        const std::vector<birkhoff::AnnulusPoint>& B) {
  auto directed = [](const auto& X, const auto& Y) {
    double worst = 0.0;
    for (const auto& x : X) {
      double best = 1e300;
      for (const auto& y : Y)
        best = std::min(best, std::hypot(birkhoff::circle_distance(x.q, y.q), x.p - y.p));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(A, B), directed(B, A));
}

/// Shoelace area between a closed lifted polyline (closed by a deck shift)
/// and the zero section, i.e. the loop integral of p dq by the trapezoid rule.
inline double loop_area(const std::vector<birkhoff::LiftedPoint>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto a = v[i];
    auto b = v[(i + 1) % v.size()];
    if (i + 1 == v.size()) b.x += 1.0;
    s += 0.5 * (a.p + b.p) * (b.x - a.x);
  }
  return s;
}

}  // namespace oracle
