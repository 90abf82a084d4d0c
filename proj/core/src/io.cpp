#include "spdekit/io.hpp"

#include "spdekit/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace spdekit {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(line, "expected a number, got '" + std::string(s) + "'");
  return v;
}

Point row_point(const CsvTable& t, const std::vector<double>& row) {
  Point p{0.0, 0.0, 0.0};
  p[0] = row[t.column("x")];
  if (auto c = t.find_column("y")) p[1] = row[*c];
  if (auto c = t.find_column("z")) p[2] = row[*c];
  return p;
}

void append_coords(std::ostringstream& os, const Point& p, int dimension) {
  os << format_double(p[0]);
  for (int k = 1; k < dimension; ++k) os << ',' << format_double(p[k]);
}

const char* coord_header(int dimension) {
  switch (dimension) {
    case 1:
      return "x";
    case 2:
      return "x,y";
    default:
      return "x,y,z";
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::size_t CsvTable::column(std::string_view name) const {
  if (auto c = find_column(name)) return *c;
  throw ParseError(1, "missing column '" + std::string(name) + "'");
}

Vector CsvTable::column_values(std::string_view name) const {
  const std::size_t c = column(name);
  Vector v(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) v[static_cast<Index>(i)] = rows[i][c];
  return v;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const std::string_view line = trim(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    ++line_no;
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (!have_header) {
      for (auto f : fields) {
        if (f.empty()) throw ParseError(line_no, "empty column name");
        if (std::find(t.header.begin(), t.header.end(), f) != t.header.end())
          throw ParseError(line_no, "duplicate column '" + std::string(f) + "'");
        t.header.emplace_back(f);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size())
      throw ParseError(line_no, "expected " + std::to_string(t.header.size()) + " fields, got " +
                                    std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_number(f, line_no));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError(1, "missing header line");
  return t;
}

Observations parse_observations_csv(std::string_view text, double default_noise_precision) {
  const CsvTable t = parse_csv(text);
  Observations obs;
  obs.values = t.column_values("value");
  const auto noise_col = t.find_column("noise_precision");
  obs.noise_precision = noise_col ? t.column_values("noise_precision")
                                  : Vector::Constant(obs.values.size(), default_noise_precision);
  for (const auto& row : t.rows) obs.locations.push_back(row_point(t, row));
  obs.validate();
  return obs;
}

std::vector<Point> parse_points_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  std::vector<Point> pts;
  for (const auto& row : t.rows) pts.push_back(row_point(t, row));
  return pts;
}

PointPattern parse_pattern_csv(std::string_view text) { return PointPattern{parse_points_csv(text)}; }

Vector parse_vertex_values_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  const std::size_t vc = t.column("vertex");
  const std::size_t xc = t.column("value");
  const Index n = static_cast<Index>(t.rows.size());
  Vector v = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double idx = t.rows[i][vc];
    if (idx != std::floor(idx) || idx < 0 || idx >= static_cast<double>(n) || !std::isnan(v[static_cast<Index>(idx)]))
      throw ParseError(i + 2, "invalid or repeated vertex index");
    v[static_cast<Index>(idx)] = t.rows[i][xc];
  }
  return v;
}

std::string vertex_values_csv(const Vector& values, std::string_view value_name) {
  std::ostringstream os;
  os << "vertex," << value_name << '\n';
  for (Index i = 0; i < values.size(); ++i) os << i << ',' << format_double(values[i]) << '\n';
  return os.str();
}

std::string points_csv(std::span<const Point> points, int dimension) {
  std::ostringstream os;
  os << coord_header(dimension) << '\n';
  for (const Point& p : points) {
    append_coords(os, p, dimension);
    os << '\n';
  }
  return os.str();
}

std::string prediction_csv(std::span<const Point> points, const Prediction& prediction, int dimension) {
  std::ostringstream os;
  os << coord_header(dimension) << ",mean,sd\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    append_coords(os, points[i], dimension);
    const auto r = static_cast<Index>(i);
    os << ',' << format_double(prediction.mean[r]) << ',' << format_double(prediction.sd[r]) << '\n';
  }
  return os.str();
}

}  // namespace spdekit
