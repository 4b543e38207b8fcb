#include "birkhoff/curve.hpp"

#include "birkhoff/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace birkhoff {

LiftedPoint LagrangianCurve::vertex(std::ptrdiff_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(vertices.size());
  std::ptrdiff_t wraps = i >= 0 ? i / n : -((-i + n - 1) / n);
  const LiftedPoint& v = vertices[static_cast<std::size_t>(i - wraps * n)];
  return {v.x + static_cast<double>(wraps), v.p};
}

LagrangianCurve zero_section(std::size_t n) { return horizontal_circle(0.0, n); }

LagrangianCurve horizontal_circle(double height, std::size_t n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 vertices");
  LagrangianCurve L;
  L.vertices.resize(n);
  L.primitive.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    L.vertices[i] = {x, height};
    L.primitive[i] = height * x;
  }
  return L;
}

LagrangianCurve graph_curve(const std::function<double(double)>& f,
                            const std::function<double(double)>& df,
                            std::size_t n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 vertices");
  LagrangianCurve L;
  L.vertices.resize(n);
  L.primitive.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    L.vertices[i] = {x, df(x)};
    L.primitive[i] = f(x);
  }
  return L;
}

LagrangianCurve fiber_translate(const LagrangianCurve& L, double c) {
  LagrangianCurve out = L;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.vertices[i].p += c;
    out.primitive[i] += c * out.vertices[i].x;
  }
  return out;
}

double signed_area(const LagrangianCurve& L) {
  const auto n = static_cast<std::ptrdiff_t>(L.size());
  double area = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const LiftedPoint a = L.vertex(i), b = L.vertex(i + 1);
    area += 0.5 * (a.p + b.p) * (b.x - a.x);
  }
  return area;
}

double primitive_defect(const LagrangianCurve& L) {
  const std::size_t n = L.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const LiftedPoint a = L.vertex(static_cast<std::ptrdiff_t>(i));
    const LiftedPoint b = L.vertex(static_cast<std::ptrdiff_t>(i) + 1);
    const double df = L.primitive[(i + 1) % n] - L.primitive[i];
    worst = std::max(worst, std::abs(df - 0.5 * (a.p + b.p) * (b.x - a.x)));
  }
  return worst;
}

namespace {

struct Segment {
  LiftedPoint a, b;
  double xmin() const { return std::min(a.x, b.x); }
  double xmax() const { return std::max(a.x, b.x); }
};

double orient(LiftedPoint o, LiftedPoint a, LiftedPoint b) {
  return (a.x - o.x) * (b.p - o.p) - (a.p - o.p) * (b.x - o.x);
}

bool on_box(LiftedPoint a, LiftedPoint b, LiftedPoint c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
         std::min(a.p, b.p) <= c.p && c.p <= std::max(a.p, b.p);
}

bool segments_meet(const Segment& s, const Segment& t) {
  const double d1 = orient(t.a, t.b, s.a), d2 = orient(t.a, t.b, s.b);
  const double d3 = orient(s.a, s.b, t.a), d4 = orient(s.a, s.b, t.b);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_box(t.a, t.b, s.a)) return true;
  if (d2 == 0 && on_box(t.a, t.b, s.b)) return true;
  if (d3 == 0 && on_box(s.a, s.b, t.a)) return true;
  if (d4 == 0 && on_box(s.a, s.b, t.b)) return true;
  return false;
}

std::vector<Segment> edges(const LagrangianCurve& L) {
  const auto n = static_cast<std::ptrdiff_t>(L.size());
  std::vector<Segment> segs(static_cast<std::size_t>(n));
  for (std::ptrdiff_t i = 0; i < n; ++i)
    segs[static_cast<std::size_t>(i)] = {L.vertex(i), L.vertex(i + 1)};
  return segs;
}

// Buckets of segment indices over [0, 1), keyed by the wrapped x-range.
struct SegmentBins {
  std::size_t count;
  std::vector<std::vector<std::size_t>> bins;

  SegmentBins(const std::vector<Segment>& segs, std::size_t k) : count(k) {
    bins.resize(k);
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const double lo = segs[i].xmin(), hi = segs[i].xmax();
      if (hi - lo >= 1.0) {
        for (auto& b : bins) b.push_back(i);
        continue;
      }
      const auto first = static_cast<long>(std::floor(lo * static_cast<double>(k)));
      const auto last = static_cast<long>(std::floor(hi * static_cast<double>(k)));
      for (long j = first; j <= last; ++j) {
        const long w = ((j % static_cast<long>(k)) + static_cast<long>(k)) %
                       static_cast<long>(k);
        auto& bin = bins[static_cast<std::size_t>(w)];
        if (bin.empty() || bin.back() != i) bin.push_back(i);
      }
    }
  }
  const std::vector<std::size_t>& at(double q) const {
    auto j = static_cast<std::size_t>(wrap_angle(q) * static_cast<double>(count));
    return bins[std::min(j, count - 1)];
  }
};

}  // namespace

bool is_simple(const LagrangianCurve& L) {
  const std::size_t n = L.size();
  if (n < 3) return true;
  const std::vector<Segment> segs = edges(L);
  const SegmentBins bins(segs, std::clamp<std::size_t>(n / 2, 1, 1 << 16));
  for (const auto& bin : bins.bins) {
    for (std::size_t u = 0; u < bin.size(); ++u) {
      for (std::size_t v = u + 1; v < bin.size(); ++v) {
        const std::size_t i = bin[u], j = bin[v];
        const bool adjacent = (i + 1) % n == j || (j + 1) % n == i;
        const Segment& s = segs[i];
        const Segment& t = segs[j];
        const long lo = static_cast<long>(std::floor(s.xmin() - t.xmax())) - 1;
        const long hi = static_cast<long>(std::ceil(s.xmax() - t.xmin())) + 1;
        for (long shift = lo; shift <= hi; ++shift) {
          const Segment ts{{t.a.x + static_cast<double>(shift), t.a.p},
                           {t.b.x + static_cast<double>(shift), t.b.p}};
          if (ts.xmax() < s.xmin() || ts.xmin() > s.xmax()) continue;
          if (adjacent) {
            // Consecutive edges share exactly one endpoint; a fold back along
            // the same line is the only way they can meet elsewhere.
            const bool forward_pair = j == (i + 1) % n;
            const long joint_shift =
                forward_pair ? (j == 0 ? 1 : 0) : (i == 0 ? -1 : 0);
            if (shift == joint_shift) {
              const LiftedPoint joint = forward_pair ? s.b : s.a;
              const LiftedPoint mine = forward_pair ? s.a : s.b;
              const LiftedPoint theirs = forward_pair ? ts.b : ts.a;
              if (orient(joint, mine, theirs) == 0.0 &&
                  (mine.x - joint.x) * (theirs.x - joint.x) +
                          (mine.p - joint.p) * (theirs.p - joint.p) > 0.0)
                return false;
              continue;
            }
          }
          if (segments_meet(s, ts)) return false;
        }
      }
    }
  }
  return true;
}

bool is_graph(const LagrangianCurve& L) {
  const auto n = static_cast<std::ptrdiff_t>(L.size());
  for (std::ptrdiff_t i = 0; i < n; ++i)
    if (!(L.vertex(i + 1).x > L.vertex(i).x)) return false;
  return true;
}

LagrangianCurve push_curve(const CESMap& map, const LagrangianCurve& L,
                           const PushOptions& opts) {
  const std::size_t n = L.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "curve too short");
  const double split = 2.0 * opts.spacing;

  struct Node {
    LiftedPoint z;
    double f;
    LiftedPoint img;
  };
  std::vector<Node> out;
  out.reserve(n);

  auto dist = [](LiftedPoint u, LiftedPoint v) {
    return std::hypot(u.x - v.x, u.p - v.p);
  };

  std::vector<Node> stack;
  Node first{L.vertices[0], L.primitive[0], map.forward(L.vertices[0])};
  Node start = first;
  for (std::size_t i = 0; i < n; ++i) {
    Node end;
    if (i + 1 < n) {
      end = {L.vertices[i + 1], L.primitive[i + 1], map.forward(L.vertices[i + 1])};
    } else {
      const LiftedPoint z{L.vertices[0].x + 1.0, L.vertices[0].p};
      const double f = start.f + 0.5 * (start.z.p + z.p) * (z.x - start.z.x);
      end = {z, f, map.forward(z)};
    }
    // Depth-first bisection emits the refined edge in order.
    out.push_back(start);
    stack.clear();
    stack.push_back(end);
    Node left = start;
    while (!stack.empty()) {
      const Node right = stack.back();
      if (dist(left.img, right.img) > split) {
        if (out.size() + stack.size() + (n - i) > opts.max_vertices)
          throw Error(ErrorKind::CurveComplexityOverflow,
                      "push_curve: vertex budget exceeded");
        Node mid;
        mid.z = {0.5 * (left.z.x + right.z.x), 0.5 * (left.z.p + right.z.p)};
        mid.f = left.f + 0.5 * (left.z.p + mid.z.p) * (mid.z.x - left.z.x);
        mid.img = map.forward(mid.z);
        stack.push_back(mid);
        continue;
      }
      stack.pop_back();
      if (!stack.empty()) {
        out.push_back(right);
        left = right;
      }
    }
    start = end;
  }

  if (opts.coarsen && out.size() > 3) {
    std::vector<Node> kept;
    kept.reserve(out.size());
    kept.push_back(out[0]);
    for (std::size_t i = 1; i < out.size(); ++i) {
      const Node& next = i + 1 < out.size()
                             ? out[i + 1]
                             : Node{{out[0].z.x + 1.0, out[0].z.p}, 0.0,
                                    {out[0].img.x + 1.0, out[0].img.p}};
      const Node& prev = kept.back();
      const double tri = 0.5 * std::abs(orient(prev.img, out[i].img, next.img));
      if (dist(prev.img, next.img) < opts.spacing && tri < opts.coarsen_area &&
          out.size() - (i - kept.size() + 1) > 3)
        continue;
      kept.push_back(out[i]);
    }
    out = std::move(kept);
  }

  LagrangianCurve image;
  image.vertices.resize(out.size());
  image.primitive.resize(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) image.vertices[i] = out[i].img;
  if (map.exactness_primitive) {
    for (std::size_t i = 0; i < out.size(); ++i)
      image.primitive[i] = map.a * out[i].f + map.exactness_primitive(out[i].z);
  } else {
    image.primitive[0] = map.a * out[0].f;
    for (std::size_t i = 1; i < out.size(); ++i) {
      const LiftedPoint a = image.vertices[i - 1], b = image.vertices[i];
      image.primitive[i] = image.primitive[i - 1] + 0.5 * (a.p + b.p) * (b.x - a.x);
    }
  }
  return image;
}

namespace {

// Heights at angle q of all edges whose x-range covers q, with half-open
// ranges so a vertex is counted once.
void column_crossings(const std::vector<Segment>& segs, const SegmentBins& bins,
                      double q, std::vector<double>& out) {
  out.clear();
  for (std::size_t idx : bins.at(q)) {
    const Segment& s = segs[idx];
    const double lo = s.xmin(), hi = s.xmax();
    if (hi <= lo) continue;
    const double base = q + std::floor(lo) - 1.0;
    for (int k = 0; k < 3; ++k) {
      const double x = base + k;
      if (x >= lo && x < hi) {
        const double t = (x - s.a.x) / (s.b.x - s.a.x);
        out.push_back(s.a.p + t * (s.b.p - s.a.p));
      }
    }
  }
}

double column_gap(std::vector<double>& c1, std::vector<double>& c2) {
  std::vector<std::pair<double, int>> all;
  all.reserve(c1.size() + c2.size());
  for (double h : c1) all.push_back({h, 0});
  for (double h : c2) all.push_back({h, 1});
  std::sort(all.begin(), all.end(),
            [](const auto& u, const auto& v) { return u.first > v.first; });
  int parity[2] = {0, 0};
  double length = 0.0;
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    parity[all[i].second] ^= 1;
    if (parity[0] != parity[1]) length += all[i].first - all[i + 1].first;
  }
  return length;
}

}  // namespace

double area_gap(const LagrangianCurve& L1, const LagrangianCurve& L2) {
  const auto s1 = edges(L1), s2 = edges(L2);
  const SegmentBins b1(s1, std::clamp<std::size_t>(L1.size(), 1, 1 << 20));
  const SegmentBins b2(s2, std::clamp<std::size_t>(L2.size(), 1, 1 << 20));
  std::vector<double> breaks{0.0, 1.0};
  for (const auto& v : L1.vertices) breaks.push_back(wrap_angle(v.x));
  for (const auto& v : L2.vertices) breaks.push_back(wrap_angle(v.x));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<double> c1, c2;
  auto gap_at = [&](double q) {
    column_crossings(s1, b1, q, c1);
    column_crossings(s2, b2, q, c2);
    return column_gap(c1, c2);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    const double w = hi - lo;
    if (w <= 0.0) continue;
    // Interior nodes only: the integrand is linear between breakpoints, and
    // avoiding the breakpoints sidesteps the half-open bookkeeping there.
    const double g1 = gap_at(lo + 0.25 * w), g2 = gap_at(lo + 0.75 * w);
    total += 0.5 * w * (g1 + g2);
  }
  return total;
}

double curve_hausdorff(const LagrangianCurve& L1, const LagrangianCurve& L2) {
  if (L1.size() == 0 || L2.size() == 0)
    throw Error(ErrorKind::EmptySet, "curve_hausdorff: empty curve");
  auto directed = [](const LagrangianCurve& A, const LagrangianCurve& B) {
    std::vector<AnnulusPoint> pts(B.size());
    for (std::size_t i = 0; i < B.size(); ++i) pts[i] = project(B.vertices[i]);
    std::sort(pts.begin(), pts.end(),
              [](const auto& u, const auto& v) { return u.q < v.q; });
    const std::size_t m = pts.size();
    double worst = 0.0;
    for (const auto& va : A.vertices) {
      const AnnulusPoint a = project(va);
      const auto it = std::lower_bound(
          pts.begin(), pts.end(), a.q,
          [](const AnnulusPoint& u, double q) { return u.q < q; });
      const std::size_t start = static_cast<std::size_t>(it - pts.begin()) % m;
      double best = std::numeric_limits<double>::infinity();
      for (int dir : {1, -1}) {
        for (std::size_t k = 0; k < m; ++k) {
          const std::size_t j =
              dir > 0 ? (start + k) % m : (start + m - 1 - k % m) % m;
          const double dq = circle_distance(a.q, pts[j].q);
          if (dq >= best) break;
          best = std::min(best, std::hypot(dq, a.p - pts[j].p));
        }
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(L1, L2), directed(L2, L1));
}

double graph_height(const LagrangianCurve& L, double q) {
  const double x0 = L.vertices[0].x;
  const double x = x0 + wrap_angle(q - x0);
  auto it = std::upper_bound(
      L.vertices.begin(), L.vertices.end(), x,
      [](double v, const LiftedPoint& z) { return v < z.x; });
  const auto i = static_cast<std::ptrdiff_t>(it - L.vertices.begin()) - 1;
  const LiftedPoint a = L.vertex(i), b = L.vertex(i + 1);
  if (b.x <= a.x) return a.p;
  const double t = (x - a.x) / (b.x - a.x);
  return a.p + t * (b.p - a.p);
}

double graph_sup_distance(const LagrangianCurve& L1, const LagrangianCurve& L2) {
  if (!is_graph(L1) || !is_graph(L2))
    throw Error(ErrorKind::InvalidArgument, "graph_sup_distance needs graphs");
  double worst = 0.0;
  for (const auto& v : L1.vertices)
    worst = std::max(worst, std::abs(v.p - graph_height(L2, v.x)));
  for (const auto& v : L2.vertices)
    worst = std::max(worst, std::abs(v.p - graph_height(L1, v.x)));
  return worst;
}

}  // namespace birkhoff
