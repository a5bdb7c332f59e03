#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ortho/cluster_eval.hpp"
#include "ortho/types.hpp"

namespace ortho {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Numeric table: one row per line, comma separated. Blank lines and lines
/// starting with '#' are skipped; a first non-comment line containing no
/// numeric field is treated as a column header. Parse errors throw
/// InvalidInput carrying "<source>:<line>:".
struct CsvTable {
  Matrix values;
  std::vector<std::string> header;
  std::vector<std::string> directives;  // "#key=value" comment lines, without '#'
};

CsvTable read_csv(std::istream& in, const std::string& source = "<stream>");
CsvTable read_csv(const std::filesystem::path& path);

/// Points: n rows, d numeric columns.
Matrix read_points_csv(const std::filesystem::path& path);

struct MatrixFile {
  Matrix values;
  std::optional<MatrixKind> kind;  // from a "#kind=distance|affinity" line
};

MatrixFile read_matrix_csv(const std::filesystem::path& path);
MatrixFile read_matrix_csv(std::istream& in, const std::string& source = "<stream>");

void write_matrix_csv(std::ostream& out, const Matrix& m, std::optional<MatrixKind> kind = std::nullopt,
                      const std::vector<std::string>& header = {});
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      std::optional<MatrixKind> kind = std::nullopt, const std::vector<std::string>& header = {});

/// Single integer column, optional header line. Ids are compacted to 0..k-1
/// in order of first appearance.
Labeling read_labels_csv(const std::filesystem::path& path);
Labeling read_labels_csv(std::istream& in, const std::string& source = "<stream>");
void write_labels_csv(const std::filesystem::path& path, const Labeling& labels);

}  // namespace ortho
