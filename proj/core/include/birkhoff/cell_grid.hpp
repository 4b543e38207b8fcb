#pragma once

// Cell-mapping outer approximation of the Conley attractor B0 on a trapping
// band, and the grid Birkhoff attractor carved out of it.

#include "birkhoff/annulus.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace birkhoff {

struct LagrangianCurve;

/// nq x np cells over [0,1) x [-band, band]; both counts powers of two.
struct CellGrid {
  int nq = 256;
  int np = 256;
  double band = 1.0;

  CellGrid() = default;
  CellGrid(int nq_, int np_, double band_);

  std::size_t size() const { return static_cast<std::size_t>(nq) * np; }
  double cell_width() const { return 1.0 / nq; }
  double cell_height() const { return 2.0 * band / np; }
  double cell_diameter() const { return std::max(cell_width(), cell_height()); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nq + static_cast<std::size_t>(i);
  }
  AnnulusPoint center(int i, int j) const {
    return {(i + 0.5) / nq, -band + (j + 0.5) * cell_height()};
  }
  AnnulusPoint center(std::size_t idx) const {
    return center(static_cast<int>(idx % nq), static_cast<int>(idx / nq));
  }
  /// Cell containing z, or nothing when |p| >= band.
  std::optional<std::size_t> locate(LiftedPoint z) const;
  int column(double q) const;
  bool operator==(const CellGrid& o) const {
    return nq == o.nq && np == o.np && band == o.band;
  }
};

enum class CellLabel { B0, Uplus, Uminus, Birkhoff, BinftyEstimate, Other };
const char* to_string(CellLabel label);

struct CellSet {
  CellGrid grid;
  std::vector<std::uint8_t> bits;
  CellLabel label = CellLabel::Other;

  CellSet() = default;
  CellSet(const CellGrid& g, CellLabel l, bool fill = false)
      : grid(g), bits(g.size(), fill ? 1 : 0), label(l) {}

  bool contains(int i, int j) const { return bits[grid.index(i, j)] != 0; }
  bool contains(std::size_t idx) const { return bits[idx] != 0; }
  void insert(std::size_t idx) { bits[idx] = 1; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<AnnulusPoint> centers() const;
  /// Lowest and highest occupied row of column i (nothing if empty column).
  std::optional<std::pair<int, int>> column_extent(int i) const;
};

/// How the image of a cell is enclosed from its sample images.
///  JacobianBox: each sample stands for a sub-box of the cell; its image is
///    enclosed (to first order) by the box img +- |J| * half_size, with J the
///    Jacobian at the cell center.
///  CellDilation: the cells of the sample images, dilated by `dilation`.
enum class Enclosure { JacobianBox, CellDilation };

struct ConleyOptions {
  int samples_per_side = 3;  // s x s sample points per cell
  Enclosure enclosure = Enclosure::JacobianBox;
  int dilation = 1;          // CellDilation only
  double box_scale = 1.0;    // JacobianBox only, inflates the sub-box images
  /// Cell images are taken under psi^map_power; 0 picks the smallest power
  /// with a^m <= 1/2, capped at 4.
  int map_power = 0;
};

/// Outer approximation of the intersection of forward images of the band:
/// X <- X meet image(X) from X = all cells, with cell images enclosed as set
/// by `opts`, until the bitmap repeats or n_iter steps. Throws NotTrapping if
/// a sample image leaves the band.
CellSet conley_attractor(const CESMap& map, const CellGrid& grid, int n_iter,
                         const ConleyOptions& opts = {},
                         int* iterations_used = nullptr);

struct BirkhoffSets {
  CellSet uplus;
  CellSet uminus;
  CellSet birkhoff;
};

/// U+ and U- are the 8-connected components of the complement of b0 reached
/// from the top and bottom rows. B keeps the cells of b0 whose Chebyshev
/// distance to both U+ and U- is within `slack` of the smallest value that
/// still separates every column (see README).
BirkhoffSets birkhoff_attractor(const CESMap& map, const CellSet& b0,
                                int slack = 1);

/// Chebyshev (8-neighbour) distance in cells from every cell to the set,
/// periodic in q. Cells of the set have distance 0.
std::vector<int> chebyshev_distance(const CellSet& sources);

CellSet dilate(const CellSet& s, int cells);
bool is_subset(const CellSet& a, const CellSet& b);
bool occupies_every_column(const CellSet& s);

/// Symmetric Hausdorff distance between the cell centers, circle metric in q.
double hausdorff_distance(const CellSet& s1, const CellSet& s2);
double hausdorff_distance(const CellSet& s, const std::vector<AnnulusPoint>& pts);
double hausdorff_distance(const std::vector<AnnulusPoint>& a,
                          const std::vector<AnnulusPoint>& b);

/// Per-column discrepancy in cells between the vertical extents of two sets.
std::vector<int> column_discrepancy(const CellSet& s1, const CellSet& s2);

/// Cells met by the polyline of a curve (points outside the band ignored).
CellSet rasterize(const LagrangianCurve& curve, const CellGrid& grid,
                  CellLabel label = CellLabel::Other);
CellSet rasterize(const std::vector<LiftedPoint>& polyline, bool closed,
                  const CellGrid& grid, CellLabel label = CellLabel::Other);

/// Fraction of sample images of member cells landing in dilate(s, cells).
double image_containment(const CESMap& map, const CellSet& s, int cells,
                         int samples_per_side = 3);

/// Run-length encoding of the bitmap in row-major order, starting with a
/// run of zeros (possibly empty).
std::vector<std::uint32_t> run_length_encode(const CellSet& s);

}  // namespace birkhoff
