#pragma once

// Essential closed curves in the annulus, stored on the universal cover with
// their Liouville primitive (branes), and their transport by CES maps.

#include "birkhoff/annulus.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace birkhoff {

/// Polyline v_0, ..., v_{N-1} closed by the edge v_{N-1} -> v_0 + (1, 0).
/// primitive[i] is f_L(v_i), with df_L = p dq along the edges.
struct LagrangianCurve {
  std::vector<LiftedPoint> vertices;
  std::vector<double> primitive;

  std::size_t size() const { return vertices.size(); }
  /// Vertex with deck bookkeeping: vertex(i + N) = vertex(i) + (1, 0).
  LiftedPoint vertex(std::ptrdiff_t i) const;
};

LagrangianCurve zero_section(std::size_t n = 1024);
LagrangianCurve horizontal_circle(double height, std::size_t n = 1024);

/// Graph of df with primitive f, sampled at n equispaced angles.
LagrangianCurve graph_curve(const std::function<double(double)>& f,
                            const std::function<double(double)>& df,
                            std::size_t n = 1024);

/// tau_c : p -> p + c, with the primitive corrected by c x on the lift so it
/// stays consistent with p dq (the result is exact iff area + c = 0).
LagrangianCurve fiber_translate(const LagrangianCurve& L, double c);

/// Integral of p dq around the curve, which is the signed area between the
/// curve and the zero section. Zero iff the curve is exact.
double signed_area(const LagrangianCurve& L);

/// Largest |f(v_{i+1}) - f(v_i) - integral of p dq over the edge|, including
/// the closing edge (where f is taken 1-periodic).
double primitive_defect(const LagrangianCurve& L);

/// No two non-adjacent edges meet on the annulus.
bool is_simple(const LagrangianCurve& L);

/// Vertices strictly increasing in x, i.e. the curve is a graph over S^1.
bool is_graph(const LagrangianCurve& L);

struct PushOptions {
  double spacing = 1e-3;  // target image edge length; split above 2x
  std::size_t max_vertices = 2'000'000;
  bool coarsen = true;    // merge vertices whose removal is area-neutral
  double coarsen_area = 1e-14;
};

/// psi(L) with primitive a f_L o psi^{-1} + F o psi^{-1}. Maps without an
/// exactness primitive get the primitive re-integrated along the image.
/// Throws CurveComplexityOverflow when refinement exceeds max_vertices.
LagrangianCurve push_curve(const CESMap& map, const LagrangianCurve& L,
                           const PushOptions& opts = {});

/// Area of the region between two essential curves: the integral over q of
/// the length of the fiber set where exactly one curve lies above.
double area_gap(const LagrangianCurve& L1, const LagrangianCurve& L2);

/// Hausdorff distance between the vertex clouds, circle metric in q.
double curve_hausdorff(const LagrangianCurve& L1, const LagrangianCurve& L2);

/// Largest vertical gap max_q |p1(q) - p2(q)| between two graph curves,
/// evaluated by linear interpolation at the vertices of both.
double graph_sup_distance(const LagrangianCurve& L1, const LagrangianCurve& L2);

/// Linear interpolation of a graph curve at angle q.
double graph_height(const LagrangianCurve& L, double q);

}  // namespace birkhoff
