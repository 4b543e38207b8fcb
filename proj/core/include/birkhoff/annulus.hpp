#pragma once

// Phase space T*S^1 = S^1 x R with Liouville form p dq, conformally exact
// symplectic (CES) self-maps of it, and the checks that certify a map is one.

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace birkhoff {

/// Point of the annulus, angle normalized to [0, 1).
struct AnnulusPoint {
  double q = 0.0;
  double p = 0.0;
};

/// Point of the universal cover R x R. Maps act on lifts so that rotation
/// numbers and broken geodesics never see the wraparound.
struct LiftedPoint {
  double x = 0.0;
  double p = 0.0;
};

inline double wrap_angle(double x) {
  double q = x - std::floor(x);
  return q >= 1.0 ? 0.0 : q;
}

/// Distance on R/Z.
inline double circle_distance(double q1, double q2) {
  const double d = std::abs(wrap_angle(q1 - q2));
  return std::min(d, 1.0 - d);
}

inline AnnulusPoint project(LiftedPoint z) { return {wrap_angle(z.x), z.p}; }
inline LiftedPoint lift(AnnulusPoint z) { return {z.q, z.p}; }

/// 1-periodic potential with its first two derivatives in closed form.
struct Potential {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> slope;
  std::function<double(double)> curvature;
  double max_abs_slope = 0.0;
  double max_abs_value = 0.0;
  std::map<std::string, double> params;
};

/// V(q) = -A cos(2 pi q) / (2 pi)^2.
Potential cosine_potential(double amplitude = 1.0);
Potential zero_potential();

/// One-step generating function h(x, X) of a twist map, with the convention
///   a p = -d1 h(x, X),   P = d2 h(x, X).
/// `stiffness` and `drift` describe its quadratic part s (X - x - drift)^2 / 2.
struct TwistGenerator {
  std::function<double(double, double)> value;
  std::function<double(double, double)> d1;
  std::function<double(double, double)> d2;
  std::function<double(double, double)> d11;
  double stiffness = 1.0;
  double drift = 0.0;
};

using PlaneMap = std::function<LiftedPoint(LiftedPoint)>;

/// Conformally exact symplectic map: psi^* (p dq) - a (p dq) = dF.
struct CESMap {
  std::string name;
  std::map<std::string, double> params;
  double a = 1.0;
  PlaneMap forward;
  PlaneMap inverse;  // empty: inverted numerically by apply_inverse
  std::function<double(LiftedPoint)> exactness_primitive;  // F, may be empty
  std::optional<TwistGenerator> primitive_step;
  double trapping_band = std::numeric_limits<double>::infinity();
  bool twist = false;
  bool conformal = true;  // false only for synthetic test maps

  bool dissipative() const { return std::isfinite(trapping_band) && a < 1.0; }
};

/// Inverse image, via the closed form when present, otherwise damped Newton
/// (tolerance 1e-12, at most 50 iterations).
LiftedPoint apply_inverse(const CESMap& map, LiftedPoint image);

/// Jacobian of forward by central differences with one Richardson step.
Eigen::Matrix2d jacobian(const CESMap& map, LiftedPoint z, double h = 1e-3);

struct ConformalityReport {
  double max_rel_error = 0.0;
  LiftedPoint worst;
};

/// max |det D psi - a| / a over an n x n grid of [0,1) x [-band, band].
ConformalityReport check_conformality(const CESMap& map, int n = 64,
                                      double band = 0.0);

/// max |inverse(forward(z)) - z| over an n x n sample grid.
double check_inverse(const CESMap& map, int n = 32, double band = 0.0);

/// Worst |loop integral of (psi^* p dq - a p dq)| over horizontal circles at
/// the given heights (the generating cycle of the annulus), by the trapezoid
/// rule on `samples` intervals plus one Richardson step.
double check_exactness(const CESMap& map, std::span<const double> heights,
                       int samples = 4096);

/// Worst mismatch between F(z2) - F(z1) and the integral of
/// psi^* p dq - a p dq along straight segments [z1, z2] spread over the band.
double check_exactness_primitive(const CESMap& map, int samples = 256);

/// True when every sample of S^1 x {+-r} maps strictly inside |p| < r.
bool check_trapping(const CESMap& map, int samples = 1024);

// ---------------------------------------------------------------- map zoo

/// (q, p) -> (q, a p).
CESMap make_trivial_contraction(double a);

/// P = a p + k V'(q) ,  Q = q + P + omega, generated by
/// h(q, Q) = k V(q) + (Q - q - omega)^2 / 2. a = 1 gives the exact symplectic
/// standard map (no trapping band).
CESMap make_dissipative_standard(double a, double k, const Potential& V,
                                 double omega = 0.0);

/// Time-T map of q' = p, p' = -V'(q) - friction p, integrated with a
/// fourth-order composition of conformally symplectic splitting steps.
CESMap make_damped_mechanical(const Potential& V, double friction, double dt,
                              double T = 1.0);

/// Damped pendulum theta'' = -sin(theta) - friction theta' written in
/// q = theta / 2pi, p = q'. Sink at (0, 0), saddle at (1/2, 0).
CESMap make_damped_pendulum(double friction, double dt = 0.05, double T = 1.0);

struct WhiskerParams {
  double a = 0.5;       // vertical contraction away from the hair
  double beta = 0.5;    // strength of the circle map q -> q + beta sin(2 pi q)/2pi
  double height = 0.5;  // hair tip
  double growth = 0.8;  // vertical expansion at the hair root
  double width = 0.08;  // half-width of the bump around q = 1/2
  double band = 0.8;
};

/// Dissipative (not conformal) test map whose attractor is the zero section
/// with a one-sided hair {1/2} x [0, height] hanging into the upper domain.
CESMap make_whisker_map(const WhiskerParams& params = {});

}  // namespace birkhoff
