#pragma once

#include "spdekit/inference.hpp"
#include "spdekit/mesh.hpp"
#include "spdekit/pointprocess.hpp"
#include "spdekit/sparse.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spdekit {

// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Numeric CSV with a header line. Blank lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::optional<std::size_t> find_column(std::string_view name) const;
  std::size_t column(std::string_view name) const;
  Vector column_values(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

// Columns x[, y[, z]], value[, noise_precision]; rows without a noise column use
// default_noise_precision.
Observations parse_observations_csv(std::string_view text, double default_noise_precision);
// Columns x[, y[, z]].
std::vector<Point> parse_points_csv(std::string_view text);
PointPattern parse_pattern_csv(std::string_view text);
// Columns vertex, value; every vertex 0..n-1 must appear once.
Vector parse_vertex_values_csv(std::string_view text);

std::string vertex_values_csv(const Vector& values, std::string_view value_name = "value");
std::string points_csv(std::span<const Point> points, int dimension);
std::string prediction_csv(std::span<const Point> points, const Prediction& prediction, int dimension);

}  // namespace spdekit
