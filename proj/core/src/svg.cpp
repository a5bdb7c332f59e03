#include "ortho/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "ortho/errors.hpp"

namespace ortho {

namespace {

// Tableau 10.
constexpr std::array<const char*, 10> kPalette = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                                  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string fixed3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_scatter_svg(std::ostream& out, const Matrix& coords, const std::optional<Labeling>& labels,
                       const ScatterStyle& style) {
  if (coords.cols() < 1) throw InvalidInput("scatter: coordinates need at least one column");
  if (labels && labels->size() != static_cast<std::size_t>(coords.rows())) {
    throw InvalidInput("scatter: " + std::to_string(labels->size()) + " labels for " +
                       std::to_string(coords.rows()) + " points");
  }
  if (!coords.allFinite()) throw InvalidInput("scatter: non-finite coordinate");
  const Index n = coords.rows();
  const bool has_y = coords.cols() >= 2;

  auto range = [&](Index col) {
    if (n == 0) return std::pair{0.0, 1.0};
    double lo = coords.col(col).minCoeff();
    double hi = coords.col(col).maxCoeff();
    if (hi - lo <= 0.0) {
      lo -= 0.5;
      hi += 0.5;
    }
    return std::pair{lo, hi};
  };
  const auto [x_lo, x_hi] = range(0);
  const auto [y_lo, y_hi] = has_y ? range(1) : std::pair{0.0, 1.0};
  const double w = style.width - 2.0 * style.margin;
  const double h = style.height - 2.0 * style.margin;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fixed3(style.width) << ' '
      << fixed3(style.height) << "\" width=\"" << fixed3(style.width) << "\" height=\"" << fixed3(style.height)
      << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << fixed3(style.width) << "\" height=\"" << fixed3(style.height)
      << "\" fill=\"#ffffff\"/>\n";
  if (!style.title.empty()) {
    out << "<text x=\"" << fixed3(style.width / 2) << "\" y=\"" << fixed3(style.margin / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << escape(style.title)
        << "</text>\n";
  }
  out << "<g stroke=\"#333333\" stroke-width=\"0.3\" fill-opacity=\"0.85\">\n";
  for (Index i = 0; i < n; ++i) {
    const double x = style.margin + (coords(i, 0) - x_lo) / (x_hi - x_lo) * w;
    const double yv = has_y ? coords(i, 1) : 0.5;
    const double y = style.margin + (1.0 - (yv - y_lo) / (y_hi - y_lo)) * h;
    const int label = labels ? (*labels)[static_cast<std::size_t>(i)] : 0;
    out << "<circle cx=\"" << fixed3(x) << "\" cy=\"" << fixed3(y) << "\" r=\"" << fixed3(style.radius)
        << "\" fill=\"" << kPalette[static_cast<std::size_t>(label) % kPalette.size()] << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_scatter_svg(const std::filesystem::path& path, const Matrix& coords,
                       const std::optional<Labeling>& labels, const ScatterStyle& style) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path.string());
  write_scatter_svg(out, coords, labels, style);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace ortho
