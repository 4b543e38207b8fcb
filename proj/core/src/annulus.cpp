#include "birkhoff/annulus.hpp"

#include "birkhoff/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <random>

namespace birkhoff {

namespace {

double sample_band(const CESMap& map, double band) {
  if (band > 0.0) return band;
  return std::isfinite(map.trapping_band) ? map.trapping_band : 1.0;
}

// Trapezoid rule for the integral of P dQ along the image of the straight
// segment z0 -> z1, refined once by Richardson extrapolation.
double image_action(const CESMap& map, LiftedPoint z0, LiftedPoint z1,
                    int samples) {
  auto trapezoid = [&](int n) {
    double sum = 0.0;
    LiftedPoint prev = map.forward(z0);
    for (int i = 1; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      const LiftedPoint img =
          map.forward({z0.x + t * (z1.x - z0.x), z0.p + t * (z1.p - z0.p)});
      sum += 0.5 * (img.p + prev.p) * (img.x - prev.x);
      prev = img;
    }
    return sum;
  };
  const double fine = trapezoid(samples);
  const double coarse = trapezoid(samples / 2);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

Potential cosine_potential(double amplitude) {
  constexpr double two_pi = 2.0 * M_PI;
  Potential V;
  V.name = "cosine";
  V.params["amplitude"] = amplitude;
  V.value = [amplitude](double q) {
    return -amplitude * std::cos(two_pi * q) / (two_pi * two_pi);
  };
  V.slope = [amplitude](double q) {
    return amplitude * std::sin(two_pi * q) / two_pi;
  };
  V.curvature = [amplitude](double q) {
    return amplitude * std::cos(two_pi * q);
  };
  V.max_abs_slope = std::abs(amplitude) / two_pi;
  V.max_abs_value = std::abs(amplitude) / (two_pi * two_pi);
  return V;
}

Potential zero_potential() {
  Potential V;
  V.name = "zero";
  V.value = [](double) { return 0.0; };
  V.slope = [](double) { return 0.0; };
  V.curvature = [](double) { return 0.0; };
  return V;
}

LiftedPoint apply_inverse(const CESMap& map, LiftedPoint image) {
  if (map.inverse) return map.inverse(image);
  // Damped Newton on forward(z) = image, started from the image itself.
  LiftedPoint z = image;
  for (int it = 0; it < 50; ++it) {
    const LiftedPoint f = map.forward(z);
    Eigen::Vector2d r(f.x - image.x, f.p - image.p);
    if (r.norm() < 1e-12) return z;
    const Eigen::Matrix2d J = jacobian(map, z, 1e-6);
    Eigen::Vector2d step = J.fullPivLu().solve(r);
    double damping = 1.0;
    for (int k = 0; k < 30; ++k) {
      const LiftedPoint trial{z.x - damping * step(0), z.p - damping * step(1)};
      const LiftedPoint ft = map.forward(trial);
      if (std::hypot(ft.x - image.x, ft.p - image.p) < r.norm()) {
        z = trial;
        break;
      }
      damping *= 0.5;
      if (k == 29) z = trial;
    }
  }
  const LiftedPoint f = map.forward(z);
  if (std::hypot(f.x - image.x, f.p - image.p) > 1e-9)
    throw Error(ErrorKind::InvalidArgument,
                "apply_inverse: Newton iteration did not converge for map " +
                    map.name);
  return z;
}

Eigen::Matrix2d jacobian(const CESMap& map, LiftedPoint z, double h) {
  auto central = [&](double step) {
    Eigen::Matrix2d J;
    const LiftedPoint xp = map.forward({z.x + step, z.p});
    const LiftedPoint xm = map.forward({z.x - step, z.p});
    const LiftedPoint pp = map.forward({z.x, z.p + step});
    const LiftedPoint pm = map.forward({z.x, z.p - step});
    J(0, 0) = (xp.x - xm.x) / (2 * step);
    J(1, 0) = (xp.p - xm.p) / (2 * step);
    J(0, 1) = (pp.x - pm.x) / (2 * step);
    J(1, 1) = (pp.p - pm.p) / (2 * step);
    return J;
  };
  return (4.0 * central(h / 2) - central(h)) / 3.0;
}

ConformalityReport check_conformality(const CESMap& map, int n, double band) {
  const double r = sample_band(map, band);
  ConformalityReport report;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const LiftedPoint z{(i + 0.5) / n, -r + 2.0 * r * (j + 0.5) / n};
      const double det = jacobian(map, z).determinant();
      const double err = std::abs(det - map.a) / map.a;
      if (err > report.max_rel_error) {
        report.max_rel_error = err;
        report.worst = z;
      }
    }
  }
  return report;
}

double check_inverse(const CESMap& map, int n, double band) {
  const double r = sample_band(map, band);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const LiftedPoint z{(i + 0.5) / n, -r + 2.0 * r * (j + 0.5) / n};
      const LiftedPoint back = apply_inverse(map, map.forward(z));
      worst = std::max(worst, std::hypot(back.x - z.x, back.p - z.p));
    }
  }
  return worst;
}

double check_exactness(const CESMap& map, std::span<const double> heights,
                       int samples) {
  double worst = 0.0;
  for (double c : heights) {
    const double pulled = image_action(map, {0.0, c}, {1.0, c}, samples);
    worst = std::max(worst, std::abs(pulled - map.a * c));
  }
  return worst;
}

double check_exactness_primitive(const CESMap& map, int samples) {
  if (!map.exactness_primitive)
    throw Error(ErrorKind::NotExact, "map " + map.name + " has no primitive");
  const double r = sample_band(map, 0.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uq(0.0, 1.0), up(-r, r),
      step(-0.05, 0.05);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const LiftedPoint z0{uq(rng), up(rng)};
    const LiftedPoint z1{z0.x + step(rng), std::clamp(z0.p + step(rng), -r, r)};
    const double lhs = image_action(map, z0, z1, 64) -
                       map.a * 0.5 * (z0.p + z1.p) * (z1.x - z0.x);
    const double rhs = map.exactness_primitive(z1) - map.exactness_primitive(z0);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

bool check_trapping(const CESMap& map, int samples) {
  if (!std::isfinite(map.trapping_band)) return false;
  const double r = map.trapping_band;
  for (int i = 0; i < samples; ++i) {
    const double x = (i + 0.5) / samples;
    for (double p : {-r, r}) {
      if (std::abs(map.forward({x, p}).p) >= r) return false;
    }
  }
  return true;
}

}  // namespace birkhoff
