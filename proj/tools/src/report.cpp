#include "report.hpp"

#include <birkhoff/error.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace birkhoff::tools {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

CsvTable& CsvTable::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw Error(ErrorKind::InvalidArgument, "CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
  return *this;
}

std::string CsvTable::str() const {
  std::string head;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) head += ',';
    head += columns_[i];
  }
  return head + '\n' + body_;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
}

std::vector<AnnulusPoint> curve_points(const LagrangianCurve& L) {
  std::vector<AnnulusPoint> pts;
  pts.reserve(L.size() + 1);
  for (std::size_t i = 0; i <= L.size(); ++i)
    pts.push_back(project(L.vertex(static_cast<std::ptrdiff_t>(i))));
  return pts;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const CellGrid& grid, const std::string& title,
                       const std::vector<SvgLayer>& layers, const std::vector<SvgPolyline>& lines,
                       int pixels) {
  const double W = pixels, H = pixels * 0.75;
  auto X = [&](double q) { return q * W; };
  auto Y = [&](double p) { return (grid.band - p) / (2.0 * grid.band) * H; };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H + 24
    << "\" viewBox=\"0 0 " << W << ' ' << H + 24 << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
    << "\" fill=\"white\" stroke=\"#444\"/>\n";
  const double cw = W / grid.nq, ch = H / grid.np;
  for (const auto& layer : layers) {
    if (!layer.cells) continue;
    s << "<g fill=\"" << layer.color << "\" fill-opacity=\"" << layer.opacity << "\">\n";
    // One rectangle per horizontal run of member cells.
    for (int j = 0; j < grid.np; ++j) {
      int i = 0;
      while (i < grid.nq) {
        if (!layer.cells->contains(i, j)) {
          ++i;
          continue;
        }
        int k = i;
        while (k < grid.nq && layer.cells->contains(k, j)) ++k;
        s << "<rect x=\"" << format_number(i * cw) << "\" y=\""
          << format_number(H - (j + 1) * ch) << "\" width=\"" << format_number((k - i) * cw)
          << "\" height=\"" << format_number(ch) << "\"/>\n";
        i = k;
      }
    }
    s << "</g>\n";
  }
  for (const auto& line : lines) {
    std::string path;
    double prev_q = -1.0;
    for (const auto& z : line.points) {
      const bool jump = prev_q < 0.0 || std::abs(z.q - prev_q) > 0.5;
      char buf[96];
      std::snprintf(buf, sizeof buf, "%c%.2f %.2f ", jump ? 'M' : 'L', X(z.q), Y(z.p));
      path += buf;
      prev_q = z.q;
    }
    s << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << line.color
      << "\" stroke-width=\"" << line.width << "\"/>\n";
  }
  s << "<text x=\"4\" y=\"" << H + 17 << "\" font-family=\"sans-serif\" font-size=\"13\">"
    << xml_escape(title) << "</text>\n</svg>\n";
  return s.str();
}

}  // namespace birkhoff::tools
