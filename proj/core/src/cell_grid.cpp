#include "birkhoff/cell_grid.hpp"

#include "birkhoff/curve.hpp"
#include "birkhoff/error.hpp"
#include "birkhoff/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <limits>

namespace birkhoff {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

CellGrid::CellGrid(int nq_, int np_, double band_) : nq(nq_), np(np_), band(band_) {
  if (!power_of_two(nq) || !power_of_two(np))
    throw Error(ErrorKind::InvalidArgument, "grid sizes must be powers of two");
  if (!(band > 0.0) || !std::isfinite(band))
    throw Error(ErrorKind::InvalidArgument, "grid band must be finite and positive");
}

int CellGrid::column(double q) const {
  return std::min(nq - 1, static_cast<int>(wrap_angle(q) * nq));
}

std::optional<std::size_t> CellGrid::locate(LiftedPoint z) const {
  if (!(std::abs(z.p) < band)) return std::nullopt;
  const int j = std::min(np - 1, static_cast<int>((z.p + band) / cell_height()));
  return index(column(z.x), j);
}

const char* to_string(CellLabel label) {
  switch (label) {
    case CellLabel::B0: return "B0";
    case CellLabel::Uplus: return "Uplus";
    case CellLabel::Uminus: return "Uminus";
    case CellLabel::Birkhoff: return "Birkhoff";
    case CellLabel::BinftyEstimate: return "BinftyEstimate";
    case CellLabel::Other: return "Other";
  }
  return "Other";
}

std::size_t CellSet::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
}

std::vector<AnnulusPoint> CellSet::centers() const {
  std::vector<AnnulusPoint> out;
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k]) out.push_back(grid.center(k));
  return out;
}

std::optional<std::pair<int, int>> CellSet::column_extent(int i) const {
  int lo = -1, hi = -1;
  for (int j = 0; j < grid.np; ++j) {
    if (contains(i, j)) {
      if (lo < 0) lo = j;
      hi = j;
    }
  }
  if (lo < 0) return std::nullopt;
  return std::make_pair(lo, hi);
}

CellSet conley_attractor(const CESMap& map, const CellGrid& grid, int n_iter,
                         const ConleyOptions& opts, int* iterations_used) {
  if (n_iter < 0) throw Error(ErrorKind::InvalidArgument, "n_iter must be >= 0");
  const int s = opts.samples_per_side;
  if (s < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  if (opts.map_power < 0) throw Error(ErrorKind::InvalidArgument, "map_power must be >= 0");
  // Iterating psi^m gives the same nested intersection, with less
  // enclosure slack accumulated per unit of contraction.
  int m = opts.map_power;
  if (m == 0)
    m = map.a < 1.0 ? std::clamp(static_cast<int>(std::ceil(std::log(0.5) / std::log(map.a))), 1, 4)
                    : 1;
  CESMap power = map;
  if (m > 1) {
    const PlaneMap f = map.forward;
    power.forward = [f, m](LiftedPoint z) {
      for (int k = 0; k < m; ++k) z = f(z);
      return z;
    };
  }
  CellSet kept(grid, CellLabel::B0, true);
  if (iterations_used) *iterations_used = 0;
  if (n_iter == 0) return kept;

  // The cell map is computed once (one sorted target list per cell); each
  // sweep then only does bit work.
  std::vector<std::vector<std::uint32_t>> targets(grid.size());
  std::atomic<bool> escaped{false};
  const bool boxes = opts.enclosure == Enclosure::JacobianBox;
  const double w = grid.cell_width(), h = grid.cell_height();
  parallel_for(0, grid.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx % grid.nq), j = static_cast<int>(idx / grid.nq);
    double eq = 0.0, ep = 0.0;
    if (boxes) {
      const AnnulusPoint c = grid.center(i, j);
      const Eigen::Matrix2d J = jacobian(power, lift(c), 0.5 * std::min(w, h)).cwiseAbs();
      const double hq = opts.box_scale * 0.5 * w / s, hp = opts.box_scale * 0.5 * h / s;
      eq = J(0, 0) * hq + J(0, 1) * hp;
      ep = J(1, 0) * hq + J(1, 1) * hp;
    }
    auto& out = targets[idx];
    for (int a = 0; a < s; ++a) {
      for (int b = 0; b < s; ++b) {
        const LiftedPoint z{(i + (a + 0.5) / s) * w, -grid.band + (j + (b + 0.5) / s) * h};
        const LiftedPoint img = power.forward(z);
        if (!(std::abs(img.p) < grid.band)) {
          escaped = true;
          return;
        }
        if (!boxes) {
          out.push_back(static_cast<std::uint32_t>(*grid.locate(img)));
          continue;
        }
        const auto i0 = static_cast<long>(std::floor((img.x - eq) * grid.nq));
        const auto i1 = static_cast<long>(std::floor((img.x + eq) * grid.nq));
        const int j0 = std::max(0, static_cast<int>(std::floor((img.p - ep + grid.band) / h)));
        const int j1 = std::min(grid.np - 1,
                                static_cast<int>(std::floor((img.p + ep + grid.band) / h)));
        for (long ii = i0; ii <= std::min(i1, i0 + grid.nq - 1); ++ii) {
          const int col = static_cast<int>(((ii % grid.nq) + grid.nq) % grid.nq);
          for (int jj = j0; jj <= j1; ++jj)
            out.push_back(static_cast<std::uint32_t>(grid.index(col, jj)));
        }
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  });
  if (escaped)
    throw Error(ErrorKind::NotTrapping,
                "conley_attractor: band is not trapping for map " + map.name);

  for (int it = 0; it < n_iter; ++it) {
    CellSet hit(grid, CellLabel::B0);
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      if (!kept.bits[idx]) continue;
      for (std::uint32_t t : targets[idx]) hit.bits[t] = 1;
    }
    if (!boxes) hit = dilate(hit, opts.dilation);
    CellSet next(grid, CellLabel::B0);
    for (std::size_t idx = 0; idx < grid.size(); ++idx)
      next.bits[idx] = kept.bits[idx] & hit.bits[idx];
    if (iterations_used) *iterations_used = it + 1;
    if (next.bits == kept.bits) break;
    kept = std::move(next);
  }
  return kept;
}

std::vector<int> chebyshev_distance(const CellSet& sources) {
  const CellGrid& g = sources.grid;
  std::vector<int> dist(g.size(), std::numeric_limits<int>::max());
  std::deque<std::size_t> queue;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (sources.bits[idx]) {
      dist[idx] = 0;
      queue.push_back(idx);
    }
  }
  while (!queue.empty()) {
    const std::size_t idx = queue.front();
    queue.pop_front();
    const int i = static_cast<int>(idx % g.nq), j = static_cast<int>(idx / g.nq);
    for (int dj = -1; dj <= 1; ++dj) {
      const int jj = j + dj;
      if (jj < 0 || jj >= g.np) continue;
      for (int di = -1; di <= 1; ++di) {
        const int ii = (i + di + g.nq) % g.nq;
        const std::size_t n = g.index(ii, jj);
        if (dist[n] > dist[idx] + 1) {
          dist[n] = dist[idx] + 1;
          queue.push_back(n);
        }
      }
    }
  }
  return dist;
}

namespace {

CellSet flood_complement(const CellSet& b0, int start_row, CellLabel label) {
  const CellGrid& g = b0.grid;
  CellSet out(g, label);
  std::deque<std::size_t> queue;
  for (int i = 0; i < g.nq; ++i) {
    const std::size_t idx = g.index(i, start_row);
    if (!b0.bits[idx]) {
      out.bits[idx] = 1;
      queue.push_back(idx);
    }
  }
  while (!queue.empty()) {
    const std::size_t idx = queue.front();
    queue.pop_front();
    const int i = static_cast<int>(idx % g.nq), j = static_cast<int>(idx / g.nq);
    for (int dj = -1; dj <= 1; ++dj) {
      const int jj = j + dj;
      if (jj < 0 || jj >= g.np) continue;
      for (int di = -1; di <= 1; ++di) {
        const std::size_t n = g.index((i + di + g.nq) % g.nq, jj);
        if (!b0.bits[n] && !out.bits[n]) {
          out.bits[n] = 1;
          queue.push_back(n);
        }
      }
    }
  }
  return out;
}

}  // namespace

BirkhoffSets birkhoff_attractor(const CESMap& map, const CellSet& b0, int slack) {
  (void)map;
  const CellGrid& g = b0.grid;
  for (int i = 0; i < g.nq; ++i) {
    if (b0.contains(i, 0) || b0.contains(i, g.np - 1))
      throw Error(ErrorKind::NoSeparation,
                  "birkhoff_attractor: b0 touches a boundary row of the band");
  }
  BirkhoffSets out;
  out.uplus = flood_complement(b0, g.np - 1, CellLabel::Uplus);
  out.uminus = flood_complement(b0, 0, CellLabel::Uminus);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (out.uplus.bits[idx] && out.uminus.bits[idx])
      throw Error(ErrorKind::NoSeparation,
                  "birkhoff_attractor: b0 does not separate the band");
  }

  // Complement components reached from neither row are enclosed only at
  // grid resolution; they count as part of both domains.
  CellSet plus_side = out.uplus, minus_side = out.uminus;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!b0.bits[idx] && !out.uplus.bits[idx] && !out.uminus.bits[idx]) {
      plus_side.bits[idx] = 1;
      minus_side.bits[idx] = 1;
    }
  }
  const std::vector<int> dplus = chebyshev_distance(plus_side);
  const std::vector<int> dminus = chebyshev_distance(minus_side);
  auto depth = [&](std::size_t idx) { return std::max(dplus[idx], dminus[idx]); };

  // Smallest depth w such that every column keeps a cell.
  int w = 0;
  for (int i = 0; i < g.nq; ++i) {
    int best = std::numeric_limits<int>::max();
    for (int j = 0; j < g.np; ++j) {
      const std::size_t idx = g.index(i, j);
      if (b0.bits[idx]) best = std::min(best, depth(idx));
    }
    if (best == std::numeric_limits<int>::max())
      throw Error(ErrorKind::NoSeparation, "birkhoff_attractor: empty column in b0");
    w = std::max(w, best);
  }
  out.birkhoff = CellSet(g, CellLabel::Birkhoff);
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    if (b0.bits[idx] &&
        (depth(idx) <= w + slack || std::abs(dplus[idx] - dminus[idx]) <= w + slack))
      out.birkhoff.bits[idx] = 1;

  // Parts of b0 that contain a ball wider than the separating depth are
  // regions the grid cannot resolve (the true set has no interior), so they
  // are kept whole. Thin features reached from one side only are dropped.
  const int radius = w + slack + 1;
  CellSet outside(g, CellLabel::Other);
  for (std::size_t idx = 0; idx < g.size(); ++idx) outside.bits[idx] = b0.bits[idx] ? 0 : 1;
  const std::vector<int> inner = chebyshev_distance(outside);
  CellSet core(g, CellLabel::Other);
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    if (inner[idx] > radius) core.bits[idx] = 1;
  const CellSet fat = dilate(core, radius);
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    if (fat.bits[idx] && b0.bits[idx]) out.birkhoff.bits[idx] = 1;
  return out;
}

CellSet dilate(const CellSet& s, int cells) {
  if (cells <= 0) return s;
  const CellGrid& g = s.grid;
  // Separable: rows first (periodic), then columns (clipped).
  CellSet horiz(g, s.label);
  for (int j = 0; j < g.np; ++j) {
    for (int i = 0; i < g.nq; ++i) {
      if (!s.contains(i, j)) continue;
      for (int d = -cells; d <= cells; ++d)
        horiz.bits[g.index(((i + d) % g.nq + g.nq) % g.nq, j)] = 1;
    }
  }
  CellSet out(g, s.label);
  for (int j = 0; j < g.np; ++j) {
    for (int i = 0; i < g.nq; ++i) {
      if (!horiz.contains(i, j)) continue;
      for (int d = std::max(0, j - cells); d <= std::min(g.np - 1, j + cells); ++d)
        out.bits[g.index(i, d)] = 1;
    }
  }
  return out;
}

bool is_subset(const CellSet& a, const CellSet& b) {
  if (!(a.grid == b.grid)) throw Error(ErrorKind::GridMismatch, "is_subset: grids differ");
  for (std::size_t k = 0; k < a.bits.size(); ++k)
    if (a.bits[k] && !b.bits[k]) return false;
  return true;
}

bool occupies_every_column(const CellSet& s) {
  for (int i = 0; i < s.grid.nq; ++i)
    if (!s.column_extent(i)) return false;
  return true;
}

namespace {

// Points bucketed by angle, each bucket sorted by p.
struct AngleBuckets {
  int count;
  std::vector<std::vector<double>> p_by_bucket;
  std::vector<std::vector<double>> q_by_bucket;

  AngleBuckets(const std::vector<AnnulusPoint>& pts, int k) : count(k) {
    p_by_bucket.resize(static_cast<std::size_t>(k));
    q_by_bucket.resize(static_cast<std::size_t>(k));
    std::vector<AnnulusPoint> sorted = pts;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& u, const auto& v) { return u.p < v.p; });
    for (const auto& z : sorted) {
      const auto b = static_cast<std::size_t>(
          std::min(k - 1, static_cast<int>(wrap_angle(z.q) * k)));
      p_by_bucket[b].push_back(z.p);
      q_by_bucket[b].push_back(wrap_angle(z.q));
    }
  }

  double nearest(AnnulusPoint z) const {
    const int home = std::min(count - 1, static_cast<int>(wrap_angle(z.q) * count));
    const double width = 1.0 / count;
    double best = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring <= count / 2; ++ring) {
      if ((ring - 1) * width >= best) break;
      for (int sign : {1, -1}) {
        if (ring == 0 && sign < 0) continue;
        if (2 * ring == count && sign < 0) continue;
        const auto b = static_cast<std::size_t>(((home + sign * ring) % count + count) % count);
        const auto& ps = p_by_bucket[b];
        const auto& qs = q_by_bucket[b];
        if (ps.empty()) continue;
        // Scan outward in p from the insertion point until the p gap alone
        // exceeds the current best.
        const auto pos = static_cast<std::ptrdiff_t>(
            std::lower_bound(ps.begin(), ps.end(), z.p) - ps.begin());
        for (std::ptrdiff_t k = pos; k < static_cast<std::ptrdiff_t>(ps.size()); ++k) {
          if (ps[k] - z.p >= best) break;
          best = std::min(best, std::hypot(circle_distance(z.q, qs[k]), ps[k] - z.p));
        }
        for (std::ptrdiff_t k = pos - 1; k >= 0; --k) {
          if (z.p - ps[k] >= best) break;
          best = std::min(best, std::hypot(circle_distance(z.q, qs[k]), ps[k] - z.p));
        }
      }
    }
    return best;
  }
};

double directed(const std::vector<AnnulusPoint>& from,
                const std::vector<AnnulusPoint>& to) {
  const int k = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(to.size()))) * 4,
                           1, 4096);
  const AngleBuckets buckets(to, k);
  std::vector<double> best(from.size());
  parallel_for(0, from.size(), [&](std::size_t i) { best[i] = buckets.nearest(from[i]); });
  double worst = 0.0;
  for (double d : best) worst = std::max(worst, d);
  return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<AnnulusPoint>& a,
                          const std::vector<AnnulusPoint>& b) {
  if (a.empty() || b.empty())
    throw Error(ErrorKind::EmptySet, "hausdorff_distance: empty set");
  return std::max(directed(a, b), directed(b, a));
}

double hausdorff_distance(const CellSet& s1, const CellSet& s2) {
  if (!(s1.grid == s2.grid))
    throw Error(ErrorKind::GridMismatch, "hausdorff_distance: grids differ");
  return hausdorff_distance(s1.centers(), s2.centers());
}

double hausdorff_distance(const CellSet& s, const std::vector<AnnulusPoint>& pts) {
  return hausdorff_distance(s.centers(), pts);
}

std::vector<int> column_discrepancy(const CellSet& s1, const CellSet& s2) {
  if (!(s1.grid == s2.grid))
    throw Error(ErrorKind::GridMismatch, "column_discrepancy: grids differ");
  std::vector<int> out(static_cast<std::size_t>(s1.grid.nq), 0);
  for (int i = 0; i < s1.grid.nq; ++i) {
    const auto e1 = s1.column_extent(i), e2 = s2.column_extent(i);
    if (!e1 || !e2) {
      out[static_cast<std::size_t>(i)] = (e1 || e2) ? s1.grid.np : 0;
      continue;
    }
    out[static_cast<std::size_t>(i)] =
        std::max(std::abs(e1->first - e2->first), std::abs(e1->second - e2->second));
  }
  return out;
}

CellSet rasterize(const std::vector<LiftedPoint>& poly, bool closed,
                  const CellGrid& grid, CellLabel label) {
  CellSet out(grid, label);
  if (poly.empty()) return out;
  const double step = 0.25 * std::min(grid.cell_width(), grid.cell_height());
  auto mark = [&](LiftedPoint z) {
    if (auto c = grid.locate(z)) out.bits[*c] = 1;
  };
  const std::size_t n = poly.size();
  const std::size_t edges = closed ? n : n - 1;
  for (std::size_t e = 0; e < edges; ++e) {
    const LiftedPoint a = poly[e];
    LiftedPoint b = poly[(e + 1) % n];
    if (closed && e + 1 == n) b.x += 1.0;
    const double len = std::hypot(b.x - a.x, b.p - a.p);
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int k = 0; k <= pieces; ++k) {
      const double t = static_cast<double>(k) / pieces;
      mark({a.x + t * (b.x - a.x), a.p + t * (b.p - a.p)});
    }
  }
  if (n == 1) mark(poly[0]);
  return out;
}

CellSet rasterize(const LagrangianCurve& curve, const CellGrid& grid, CellLabel label) {
  return rasterize(curve.vertices, true, grid, label);
}

double image_containment(const CESMap& map, const CellSet& s, int cells,
                         int samples_per_side) {
  const CellSet grown = dilate(s, cells);
  const CellGrid& g = s.grid;
  std::vector<std::size_t> members;
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    if (s.bits[idx]) members.push_back(idx);
  if (members.empty()) throw Error(ErrorKind::EmptySet, "image_containment: empty set");
  const int k = samples_per_side;
  std::vector<int> inside(members.size(), 0);
  parallel_for(0, members.size(), [&](std::size_t m) {
    const std::size_t idx = members[m];
    const int i = static_cast<int>(idx % g.nq), j = static_cast<int>(idx / g.nq);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        const LiftedPoint z{(i + (a + 0.5) / k) * g.cell_width(),
                            -g.band + (j + (b + 0.5) / k) * g.cell_height()};
        const auto c = g.locate(map.forward(z));
        if (c && grown.bits[*c]) ++inside[m];
      }
    }
  });
  double total = 0.0;
  for (int v : inside) total += v;
  return total / (static_cast<double>(members.size()) * k * k);
}

std::vector<std::uint32_t> run_length_encode(const CellSet& s) {
  std::vector<std::uint32_t> runs;
  std::uint8_t current = 0;
  std::uint32_t length = 0;
  for (std::uint8_t b : s.bits) {
    if (b == current) {
      ++length;
    } else {
      runs.push_back(length);
      current = b;
      length = 1;
    }
  }
  runs.push_back(length);
  return runs;
}

}  // namespace birkhoff
