#include "birkhoff/annulus.hpp"

#include "birkhoff/error.hpp"

#include <array>
#include <memory>
#include <vector>

namespace birkhoff {

CESMap make_trivial_contraction(double a) {
  if (!(a > 0.0 && a < 1.0))
    throw Error(ErrorKind::InvalidArgument,
                "trivial contraction needs 0 < a < 1");
  CESMap m;
  m.name = "trivial_contraction";
  m.params["a"] = a;
  m.a = a;
  m.forward = [a](LiftedPoint z) { return LiftedPoint{z.x, a * z.p}; };
  m.inverse = [a](LiftedPoint z) { return LiftedPoint{z.x, z.p / a}; };
  m.exactness_primitive = [](LiftedPoint) { return 0.0; };
  m.trapping_band = 1.0;
  return m;
}

CESMap make_dissipative_standard(double a, double k, const Potential& V,
                                 double omega) {
  if (!(a > 0.0 && a <= 1.0))
    throw Error(ErrorKind::InvalidArgument,
                "dissipative standard map needs 0 < a <= 1");
  if (!V.value || !V.slope || !V.curvature)
    throw Error(ErrorKind::InvalidArgument, "potential must be closed form");
  CESMap m;
  m.name = "dissipative_standard";
  m.params = {{"a", a}, {"k", k}, {"omega", omega}};
  for (const auto& [key, val] : V.params) m.params["V." + key] = val;
  m.a = a;
  auto slope = V.slope;
  auto value = V.value;
  m.forward = [a, k, omega, slope](LiftedPoint z) {
    const double P = a * z.p + k * slope(z.x);
    return LiftedPoint{z.x + P + omega, P};
  };
  m.inverse = [a, k, omega, slope](LiftedPoint z) {
    const double x = z.x - z.p - omega;
    return LiftedPoint{x, (z.p - k * slope(x)) / a};
  };
  m.exactness_primitive = [a, k, slope, value](LiftedPoint z) {
    const double P = a * z.p + k * slope(z.x);
    return k * value(z.x) + 0.5 * P * P;
  };

  TwistGenerator h;
  h.stiffness = 1.0;
  h.drift = omega;
  auto curvature = V.curvature;
  h.value = [k, omega, value](double x, double X) {
    const double d = X - x - omega;
    return k * value(x) + 0.5 * d * d;
  };
  h.d1 = [k, omega, slope](double x, double X) {
    return k * slope(x) - (X - x - omega);
  };
  h.d2 = [omega](double x, double X) { return X - x - omega; };
  h.d11 = [k, curvature](double x, double) { return k * curvature(x) + 1.0; };
  m.primitive_step = h;

  if (a < 1.0)
    m.trapping_band = 1.25 * std::abs(k) * V.max_abs_slope / (1.0 - a) + 0.05;
  m.twist = true;
  return m;
}

namespace {

// Elementary conformally symplectic steps of the damped mechanical flow.
// Each carries its own primitive F, with psi^* (p dq) - a p dq = dF.
enum class Piece { Damp, Kick, Drift };

struct Step {
  Piece piece;
  double s;
};

struct SplittingFlow {
  Potential V;
  double friction;
  std::vector<Step> steps;

  LiftedPoint apply(const Step& st, LiftedPoint z) const {
    switch (st.piece) {
      case Piece::Damp: return {z.x, std::exp(-friction * st.s) * z.p};
      case Piece::Kick: return {z.x, z.p - st.s * V.slope(z.x)};
      case Piece::Drift: return {z.x + st.s * z.p, z.p};
    }
    return z;
  }
  LiftedPoint undo(const Step& st, LiftedPoint z) const {
    switch (st.piece) {
      case Piece::Damp: return {z.x, std::exp(friction * st.s) * z.p};
      case Piece::Kick: return {z.x, z.p + st.s * V.slope(z.x)};
      case Piece::Drift: return {z.x - st.s * z.p, z.p};
    }
    return z;
  }
  double ratio(const Step& st) const {
    return st.piece == Piece::Damp ? std::exp(-friction * st.s) : 1.0;
  }
  double primitive(const Step& st, LiftedPoint z) const {
    switch (st.piece) {
      case Piece::Damp: return 0.0;
      case Piece::Kick: return -st.s * V.value(z.x);
      case Piece::Drift: return 0.5 * st.s * z.p * z.p;
    }
    return 0.0;
  }

  LiftedPoint forward(LiftedPoint z) const {
    for (const Step& st : steps) z = apply(st, z);
    return z;
  }
  LiftedPoint inverse(LiftedPoint z) const {
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) z = undo(*it, z);
    return z;
  }
  // F of a composition phi o chi is a_phi F_chi + F_phi o chi.
  double exactness(LiftedPoint z) const {
    double F = 0.0;
    for (const Step& st : steps) {
      F = ratio(st) * F + primitive(st, z);
      z = apply(st, z);
    }
    return F;
  }
};

void append_strang(std::vector<Step>& out, double s) {
  out.push_back({Piece::Damp, 0.5 * s});
  out.push_back({Piece::Kick, 0.5 * s});
  out.push_back({Piece::Drift, s});
  out.push_back({Piece::Kick, 0.5 * s});
  out.push_back({Piece::Damp, 0.5 * s});
}

}  // namespace

CESMap make_damped_mechanical(const Potential& V, double friction, double dt,
                              double T) {
  if (!(friction > 0.0))
    throw Error(ErrorKind::InvalidArgument, "friction must be positive");
  if (!(dt > 0.0) || !(T > 0.0))
    throw Error(ErrorKind::InvalidArgument, "dt and T must be positive");
  const double steps_real = T / dt;
  const long n = std::lround(steps_real);
  if (n < 1 || std::abs(steps_real - static_cast<double>(n)) > 1e-9 * steps_real)
    throw Error(ErrorKind::InvalidArgument, "dt must divide T");
  if (!V.value || !V.slope)
    throw Error(ErrorKind::InvalidArgument, "potential must be closed form");

  // Yoshida triple jump turns the symmetric second-order step into a
  // fourth-order one without leaving the conformally symplectic class.
  const double cbrt2 = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cbrt2);
  const double w0 = -cbrt2 / (2.0 - cbrt2);

  auto flow = std::make_shared<SplittingFlow>();
  flow->V = V;
  flow->friction = friction;
  for (long i = 0; i < n; ++i) {
    append_strang(flow->steps, w1 * dt);
    append_strang(flow->steps, w0 * dt);
    append_strang(flow->steps, w1 * dt);
  }

  CESMap m;
  m.name = "damped_mechanical";
  m.params = {{"friction", friction}, {"dt", dt}, {"T", T}};
  for (const auto& [key, val] : V.params) m.params["V." + key] = val;
  m.a = std::exp(-friction * T);
  m.forward = [flow](LiftedPoint z) { return flow->forward(z); };
  m.inverse = [flow](LiftedPoint z) { return flow->inverse(z); };
  m.exactness_primitive = [flow](LiftedPoint z) { return flow->exactness(z); };
  // |p| decreases on the boundary of the band once friction r > max|V'|.
  m.trapping_band = 2.0 * V.max_abs_slope / friction + 0.1;
  return m;
}

CESMap make_damped_pendulum(double friction, double dt, double T) {
  CESMap m = make_damped_mechanical(cosine_potential(1.0), friction, dt, T);
  m.name = "damped_pendulum";
  m.params.erase("V.amplitude");
  return m;
}

CESMap make_whisker_map(const WhiskerParams& w) {
  if (!(w.a > 0.0 && w.a < 1.0) || !(w.width > 0.0 && w.width < 0.5) ||
      !(w.beta > 0.0 && w.beta < 1.0))
    throw Error(ErrorKind::InvalidArgument, "whisker parameters out of range");
  CESMap m;
  m.name = "whisker";
  m.params = {{"a", w.a},         {"beta", w.beta},   {"height", w.height},
              {"growth", w.growth}, {"width", w.width}, {"band", w.band}};
  m.a = w.a;
  m.forward = [w](LiftedPoint z) {
    const double x = z.x + w.beta * std::sin(2.0 * M_PI * z.x) / (2.0 * M_PI);
    const double d = circle_distance(z.x, 0.5);
    double chi = 0.0;
    if (d < w.width) {
      const double c = std::cos(M_PI * d / (2.0 * w.width));
      chi = c * c;
    }
    const double up = std::max(z.p, 0.0);
    const double p =
        w.a * z.p + chi * up * ((1.0 - w.a) + w.growth * (w.height - z.p));
    return LiftedPoint{x, p};
  };
  m.trapping_band = w.band;
  m.conformal = false;
  return m;
}

}  // namespace birkhoff
