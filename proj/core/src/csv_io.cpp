#include "ortho/csv_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "ortho/errors.hpp"

namespace ortho {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_double(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

CsvTable read_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      const auto body = trim(view.substr(1));
      if (body.find('=') != std::string_view::npos) table.directives.emplace_back(body);
      continue;
    }
    const auto fields = split(view);
    std::vector<double> row;
    row.reserve(fields.size());
    std::size_t bad = fields.size();
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const auto v = parse_double(fields[f]);
      if (!v) {
        bad = f;
        break;
      }
      row.push_back(*v);
    }
    if (bad != fields.size()) {
      bool any_numeric = false;
      for (auto field : fields) any_numeric = any_numeric || parse_double(field).has_value();
      if (!seen_data && table.header.empty() && !any_numeric) {
        for (auto field : fields) table.header.emplace_back(field);
        continue;
      }
      throw InvalidInput(source + ":" + std::to_string(line_no) + ": non-numeric field '" +
                         std::string(fields[bad]) + "' in column " + std::to_string(bad + 1));
    }
    for (std::size_t f = 0; f < row.size(); ++f) {
      if (!std::isfinite(row[f])) {
        throw InvalidInput(source + ":" + std::to_string(line_no) + ": non-finite value in column " +
                           std::to_string(f + 1));
      }
    }
    if (!seen_data) {
      width = row.size();
      seen_data = true;
    } else if (row.size() != width) {
      throw InvalidInput(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(width) +
                         " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) table.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_csv(in, path.string());
}

Matrix read_points_csv(const std::filesystem::path& path) {
  CsvTable table = read_csv(path);
  if (table.values.rows() == 0) throw InvalidInput(path.string() + ": no data rows");
  return std::move(table.values);
}

MatrixFile read_matrix_csv(std::istream& in, const std::string& source) {
  CsvTable table = read_csv(in, source);
  MatrixFile out;
  for (const auto& d : table.directives) {
    std::string_view view(d);
    if (!view.starts_with("kind=")) continue;
    const auto value = trim(view.substr(5));
    if (value == "distance") {
      out.kind = MatrixKind::distance;
    } else if (value == "affinity") {
      out.kind = MatrixKind::affinity;
    } else {
      throw InvalidInput(source + ": unknown matrix kind '" + std::string(value) + "'");
    }
  }
  if (table.values.rows() == 0 || table.values.rows() != table.values.cols()) {
    throw InvalidInput(source + ": expected a square matrix, got " + std::to_string(table.values.rows()) + "x" +
                       std::to_string(table.values.cols()));
  }
  out.values = std::move(table.values);
  return out;
}

MatrixFile read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_matrix_csv(in, path.string());
}

void write_matrix_csv(std::ostream& out, const Matrix& m, std::optional<MatrixKind> kind,
                      const std::vector<std::string>& header) {
  if (kind) out << "#kind=" << to_string(*kind) << '\n';
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  if (!header.empty()) out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m, std::optional<MatrixKind> kind,
                      const std::vector<std::string>& header) {
  auto out = open_output(path);
  write_matrix_csv(out, m, kind, header);
  if (!out) throw Error("failed writing " + path.string());
}

Labeling read_labels_csv(std::istream& in, const std::string& source) {
  CsvTable table = read_csv(in, source);
  if (table.values.cols() != 1) throw InvalidInput(source + ": labels must be a single column");
  std::vector<int> raw;
  raw.reserve(static_cast<std::size_t>(table.values.rows()));
  for (Index i = 0; i < table.values.rows(); ++i) {
    const double v = table.values(i, 0);
    if (v != static_cast<double>(static_cast<int>(v))) {
      throw InvalidInput(source + ": label on data row " + std::to_string(i + 1) + " is not an integer");
    }
    raw.push_back(static_cast<int>(v));
  }
  return Labeling::compact(raw);
}

Labeling read_labels_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_labels_csv(in, path.string());
}

void write_labels_csv(const std::filesystem::path& path, const Labeling& labels) {
  auto out = open_output(path);
  out << "label\n";
  for (int id : labels.labels()) out << id << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace ortho
