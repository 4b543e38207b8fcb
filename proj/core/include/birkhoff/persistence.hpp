#pragma once

// Lower-star persistence over Z2 of cubical grids that are periodic along
// the first axis, relative to a fixed subcomplex.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace birkhoff {

/// Vertex grid; vertex index = sum v_k * stride_k with axis 0 fastest.
struct CubicalGrid {
  std::vector<int> sizes;
  std::vector<bool> periodic;

  std::size_t vertex_count() const;
};

struct EssentialBar {
  int degree = 0;
  double birth = 0.0;
  std::size_t vertex = 0;  // vertex attaining the birth value
};

struct PersistenceResult {
  std::vector<EssentialBar> essential;
  std::size_t cells = 0;
  std::size_t finite_pairs = 0;
};

/// Persistence of the filtration of C(X) / C(A) by max vertex value, where A
/// is the subcomplex spanned by vertices with relative[v] != 0 (pass an
/// empty vector for absolute persistence). Cells are ordered by
/// (value, dimension, index) and reduced column by column with clearing.
PersistenceResult lower_star_persistence(const CubicalGrid& grid,
                                         const std::vector<double>& values,
                                         const std::vector<std::uint8_t>& relative = {});

struct SublevelEvent {
  double value = 0.0;
  std::size_t vertex = 0;
};

/// Level at which the sublevel set first contains a cycle with odd winding
/// along the periodic axis 0 (union-find over grid edges with winding parity).
SublevelEvent odd_cycle_birth(const CubicalGrid& grid, const std::vector<double>& values);

/// Global minimum vertex.
SublevelEvent minimum_vertex(const std::vector<double>& values);

}  // namespace birkhoff
