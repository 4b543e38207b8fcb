#pragma once

// Min-max spectral invariants c(1, S), c(mu, S) of generating functions and
// the pair invariants, gamma and c distances built on them.

#include "birkhoff/genfun.hpp"
#include "birkhoff/persistence.hpp"

#include <string>

namespace birkhoff {

enum class CohomologyClass { PointClass, FundamentalClass };

const char* to_string(CohomologyClass cls);

struct SpectralOptions {
  bool force_persistence = false;
  bool polish = true;
  std::size_t max_vertices = std::size_t{1} << 24;
};

struct SpectralValue {
  double raw = 0.0;       // birth level on the sampled grid
  double polished = 0.0;  // value at the nearby critical point found by Newton
  std::string method;     // "fastpath" or "persistence"
  int degree = 0;         // persistence degree i + deg(cls)
};

/// Sampled lower-star data of S over base x fiber windows.
struct SampledGF {
  CubicalGrid grid;
  std::vector<double> values;
  std::vector<std::uint8_t> shell;  // negative shell, empty for index 0
};

SampledGF sample_gf(const DiscreteGF& s, std::size_t max_vertices = std::size_t{1} << 24);

/// Base point and fiber coordinates of a grid vertex of sample_gf(s).
Eigen::VectorXd vertex_coordinates(const DiscreteGF& s, std::size_t vertex);

SpectralValue c_invariant(const DiscreteGF& s, CohomologyClass cls,
                          const SpectralOptions& opts = {});

struct SpectralPair {
  double c_minus = 0.0;
  double c_plus = 0.0;
  double c_minus_raw = 0.0;
  double c_plus_raw = 0.0;
  std::string method;

  double gamma() const { return c_plus - c_minus; }
  double c() const;
};

/// c(1, S2 - S1) and c(mu, S2 - S1) with the brane shifts included. Chain
/// GFs are reduced first.
SpectralPair spectral_pair(const BraneGF& l1, const BraneGF& l2,
                           const SpectralOptions& opts = {});

double gamma_distance(const BraneGF& l1, const BraneGF& l2, const SpectralOptions& opts = {});
double c_distance(const BraneGF& l1, const BraneGF& l2, const SpectralOptions& opts = {});

/// inf over a of c(T_a l1, l2), minimized by golden-section search. Equals
/// gamma_distance(l1, l2) when the invariants are consistent.
double gamma_by_shift_infimum(const BraneGF& l1, const BraneGF& l2,
                              const SpectralOptions& opts = {});

}  // namespace birkhoff
