#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "ortho/cluster_eval.hpp"
#include "ortho/types.hpp"

namespace ortho {

struct ScatterStyle {
  double width = 800.0;
  double height = 800.0;
  double margin = 40.0;
  double radius = 4.0;
  std::string title;
};

/// Self-contained SVG scatter of the first two columns of `coords`, one
/// <circle> per row, coloured by label (categorical palette, cycled).
void write_scatter_svg(std::ostream& out, const Matrix& coords, const std::optional<Labeling>& labels,
                       const ScatterStyle& style = {});
void write_scatter_svg(const std::filesystem::path& path, const Matrix& coords,
                       const std::optional<Labeling>& labels, const ScatterStyle& style = {});

}  // namespace ortho
