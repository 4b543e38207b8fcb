#include "birkhoff/persistence.hpp"

#include "birkhoff/error.hpp"

#include <algorithm>
#include <numeric>

namespace birkhoff {

std::size_t CubicalGrid::vertex_count() const {
  std::size_t n = 1;
  for (int s : sizes) n *= static_cast<std::size_t>(s);
  return n;
}

namespace {

void check_grid(const CubicalGrid& g, std::size_t values) {
  if (g.sizes.empty() || g.sizes.size() != g.periodic.size())
    throw Error(ErrorKind::InvalidArgument, "cubical grid: bad shape");
  for (std::size_t k = 0; k < g.sizes.size(); ++k)
    if (g.sizes[k] < (g.periodic[k] ? 3 : 1))
      throw Error(ErrorKind::InvalidArgument, "cubical grid: axis too short");
  if (values != g.vertex_count())
    throw Error(ErrorKind::InvalidArgument, "cubical grid: value count mismatch");
}

using Column = std::vector<std::int32_t>;

// Symmetric difference of two ascending columns.
void add_into(Column& target, const Column& other, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), other.begin(), other.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

}  // namespace

PersistenceResult lower_star_persistence(const CubicalGrid& grid,
                                         const std::vector<double>& values,
                                         const std::vector<std::uint8_t>& relative) {
  check_grid(grid, values.size());
  const std::size_t d = grid.sizes.size();
  if (!relative.empty() && relative.size() != values.size())
    throw Error(ErrorKind::InvalidArgument, "relative mask size mismatch");

  // Doubled coordinates: even = vertex, odd = edge to the next vertex.
  std::vector<std::int64_t> csize(d), cstride(d), vstride(d);
  std::int64_t total = 1, vs = 1;
  for (std::size_t k = 0; k < d; ++k) {
    csize[k] = grid.periodic[k] ? 2 * grid.sizes[k] : 2 * grid.sizes[k] - 1;
    cstride[k] = total;
    total *= csize[k];
    vstride[k] = vs;
    vs *= grid.sizes[k];
  }
  if (total > (std::int64_t{1} << 30))
    throw Error(ErrorKind::BackendLimit, "persistence: complex too large");

  const auto ncell = static_cast<std::size_t>(total);
  std::vector<double> cval(ncell);
  std::vector<std::uint32_t> cvert(ncell);
  std::vector<std::uint8_t> cdim(ncell), skip(ncell, 0);
  for (std::size_t c = 0; c < ncell; ++c) {
    std::int64_t coord[4] = {0, 0, 0, 0};
    std::int64_t rem = static_cast<std::int64_t>(c);
    int dim = 0;
    for (std::size_t k = 0; k < d; ++k) {
      coord[k] = rem % csize[k];
      rem /= csize[k];
      dim += static_cast<int>(coord[k] & 1);
    }
    cdim[c] = static_cast<std::uint8_t>(dim);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    bool all_rel = true;
    for (int mask = 0; mask < (1 << d); ++mask) {
      std::size_t v = 0;
      bool valid = true;
      for (std::size_t k = 0; k < d; ++k) {
        std::int64_t vk = coord[k] / 2;
        if (coord[k] & 1) {
          if (mask & (1 << k)) vk += 1;
        } else if (mask & (1 << k)) {
          valid = false;
          break;
        }
        if (grid.periodic[k]) vk %= grid.sizes[k];
        v += static_cast<std::size_t>(vk * vstride[k]);
      }
      if (!valid) continue;
      if (values[v] > best || (values[v] == best && v > arg)) {
        best = values[v];
        arg = v;
      }
      if (relative.empty() || !relative[v]) all_rel = false;
    }
    cval[c] = best;
    cvert[c] = static_cast<std::uint32_t>(arg);
    skip[c] = all_rel ? 1 : 0;
  }

  std::vector<std::int32_t> order;
  order.reserve(ncell);
  for (std::size_t c = 0; c < ncell; ++c)
    if (!skip[c]) order.push_back(static_cast<std::int32_t>(c));
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    if (cval[a] != cval[b]) return cval[a] < cval[b];
    if (cdim[a] != cdim[b]) return cdim[a] < cdim[b];
    return a < b;
  });
  std::vector<std::int32_t> rank(ncell, -1);
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<std::int32_t>(r);

  const std::size_t n = order.size();
  std::vector<std::int32_t> pivot_owner(n, -1);   // row -> column with that pivot
  std::vector<std::uint8_t> cleared(n, 0), paired(n, 0);
  std::vector<Column> reduced(n);
  Column col, scratch;
  std::size_t pairs = 0;

  for (int dim = static_cast<int>(d); dim >= 1; --dim) {
    for (std::size_t r = 0; r < n; ++r) {
      const std::int32_t c = order[r];
      if (cdim[c] != dim || cleared[r]) continue;
      col.clear();
      std::int64_t rem = c;
      for (std::size_t k = 0; k < d; ++k) {
        const std::int64_t ck = rem % csize[k];
        rem /= csize[k];
        if (!(ck & 1)) continue;
        for (int side : {-1, 1}) {
          std::int64_t nk = ck + side;
          if (grid.periodic[k]) nk = (nk + csize[k]) % csize[k];
          const std::int64_t face = c + (nk - ck) * cstride[k];
          const std::int32_t fr = rank[static_cast<std::size_t>(face)];
          if (fr >= 0) col.push_back(fr);
        }
      }
      std::sort(col.begin(), col.end());
      while (!col.empty()) {
        const std::int32_t owner = pivot_owner[static_cast<std::size_t>(col.back())];
        if (owner < 0) break;
        add_into(col, reduced[static_cast<std::size_t>(owner)], scratch);
      }
      if (!col.empty()) {
        const auto piv = static_cast<std::size_t>(col.back());
        pivot_owner[piv] = static_cast<std::int32_t>(r);
        cleared[piv] = 1;
        paired[piv] = 1;
        paired[r] = 1;
        reduced[r] = col;
        ++pairs;
      }
    }
  }

  PersistenceResult out;
  out.cells = n;
  out.finite_pairs = pairs;
  for (std::size_t r = 0; r < n; ++r) {
    if (paired[r]) continue;
    const std::int32_t c = order[r];
    out.essential.push_back({cdim[c], cval[c], cvert[c]});
  }
  std::sort(out.essential.begin(), out.essential.end(), [](const auto& a, const auto& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.birth < b.birth;
  });
  return out;
}

SublevelEvent minimum_vertex(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorKind::EmptySet, "minimum_vertex: no values");
  const auto it = std::min_element(values.begin(), values.end());
  return {*it, static_cast<std::size_t>(it - values.begin())};
}

SublevelEvent odd_cycle_birth(const CubicalGrid& grid, const std::vector<double>& values) {
  check_grid(grid, values.size());
  if (!grid.periodic[0])
    throw Error(ErrorKind::InvalidArgument, "odd_cycle_birth: axis 0 must be periodic");
  const std::size_t nv = values.size();
  const std::size_t d = grid.sizes.size();
  std::vector<std::size_t> stride(d);
  std::size_t s = 1;
  for (std::size_t k = 0; k < d; ++k) {
    stride[k] = s;
    s *= static_cast<std::size_t>(grid.sizes[k]);
  }
  std::vector<std::size_t> order(nv);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] != values[b] ? values[a] < values[b] : a < b;
  });

  // parity[v] = winding parity of the tree path from v to its root.
  std::vector<std::size_t> parent(nv);
  std::vector<std::uint8_t> parity(nv, 0), present(nv, 0);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v, std::uint8_t& par) {
    par = 0;
    std::size_t root = v;
    while (parent[root] != root) {
      par ^= parity[root];
      root = parent[root];
    }
    // Path compression keeping parities consistent.
    std::uint8_t acc = par;
    while (parent[v] != root) {
      const std::size_t next = parent[v];
      const std::uint8_t pv = parity[v];
      parent[v] = root;
      parity[v] = acc;
      acc ^= pv;
      v = next;
    }
    return root;
  };

  for (std::size_t v : order) {
    present[v] = 1;
    std::size_t rem = v;
    std::vector<std::size_t> coord(d);
    for (std::size_t k = 0; k < d; ++k) {
      coord[k] = rem % static_cast<std::size_t>(grid.sizes[k]);
      rem /= static_cast<std::size_t>(grid.sizes[k]);
    }
    for (std::size_t k = 0; k < d; ++k) {
      for (int side : {-1, 1}) {
        long ck = static_cast<long>(coord[k]) + side;
        std::uint8_t crossing = 0;
        if (ck < 0 || ck >= grid.sizes[k]) {
          if (!grid.periodic[k]) continue;
          ck = (ck + grid.sizes[k]) % grid.sizes[k];
          crossing = k == 0 ? 1 : 0;
        }
        const std::size_t w = v + (static_cast<std::size_t>(ck) - coord[k]) * stride[k];
        if (!present[w]) continue;
        std::uint8_t pv, pw;
        const std::size_t rv = find(v, pv), rw = find(w, pw);
        if (rv == rw) {
          if ((pv ^ pw ^ crossing) != 0) return {values[v], v};
          continue;
        }
        parent[rv] = rw;
        parity[rv] = pv ^ pw ^ crossing;
      }
    }
  }
  throw Error(ErrorKind::EssentialClassNotFound, "odd_cycle_birth: no winding cycle");
}

}  // namespace birkhoff
