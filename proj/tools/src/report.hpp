#pragma once

// Output writers: CSV tables with round-trip number formatting, SVG figures
// of cell sets and curves, and file helpers.

#include <birkhoff/cell_grid.hpp>
#include <birkhoff/curve.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace birkhoff::tools {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  CsvTable& row(const std::vector<std::string>& cells);
  std::string str() const;
  const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
  std::string body_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

struct SvgLayer {
  const CellSet* cells = nullptr;
  std::string color;
  double opacity = 1.0;
};

struct SvgPolyline {
  std::vector<AnnulusPoint> points;  // split where q wraps around
  std::string color;
  double width = 1.0;
};

/// Annulus window [0,1) x [-band, band] drawn with cell layers beneath
/// polylines and point marks.
std::string render_svg(const CellGrid& grid, const std::string& title,
                       const std::vector<SvgLayer>& layers,
                       const std::vector<SvgPolyline>& lines = {}, int pixels = 640);

std::vector<AnnulusPoint> curve_points(const LagrangianCurve& L);

}  // namespace birkhoff::tools
