#pragma once

#include "birkhoff/annulus.hpp"

#include <vector>

namespace birkhoff {

struct ManifoldOptions {
  double seed_distance = 1e-5;  // delta_0 along the unstable eigenvector
  double spacing = 1e-3;        // maximal gap between consecutive points
  int fundamental_points = 64;
  int max_iterations = 400;
  double min_segment = 1e-9;    // stop once a whole image segment is this short
  std::size_t max_points = 4'000'000;
};

struct UnstableManifold {
  LiftedPoint saddle;
  double lambda_u = 0.0;
  double lambda_s = 0.0;
  Eigen::Vector2d eigenvector;
  std::vector<std::vector<LiftedPoint>> branches;  // both sides of the saddle
  double arc_length = 0.0;
};

/// Grows both branches of W^u(saddle) by iterating a fundamental segment
/// seeded at distance delta_0 along the unstable eigenvector, refining so
/// that consecutive points are at most `spacing` apart, until the total arc
/// length exceeds arc_budget or the images collapse into a sink.
/// Throws NotHyperbolic unless |lambda_s| < 1 < |lambda_u|.
UnstableManifold unstable_manifold(const CESMap& map, AnnulusPoint saddle,
                                   double arc_budget,
                                   const ManifoldOptions& opts = {});

/// All points of both branches projected to the annulus, with the saddle.
std::vector<AnnulusPoint> manifold_points(const UnstableManifold& w);

}  // namespace birkhoff
