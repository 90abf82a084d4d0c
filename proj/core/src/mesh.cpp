#include "spdekit/mesh.hpp"

#include "spdekit/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

namespace spdekit {

namespace {

Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Point cross(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Point& a) { return std::sqrt(dot(a, a)); }

// Union-find used for the connectivity check.
class DisjointSets {
 public:
  explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }
  Index find(Index i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<Index> parent_;
};

double planar_signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

}  // namespace

std::string_view to_string(MeshKind kind) {
  switch (kind) {
    case MeshKind::interval:
      return "interval";
    case MeshKind::planar:
      return "planar";
    case MeshKind::sphere:
      return "sphere";
  }
  return "unknown";
}

Mesh::Mesh(MeshKind kind, std::vector<Point> vertices, std::vector<Simplex> simplices)
    : kind_(kind), vertices_(std::move(vertices)), simplices_(std::move(simplices)) {
  const Index n = num_vertices();
  const int k = simplex_size();
  if (n == 0) throw InvalidArgument("mesh has no vertices");
  if (simplices_.empty()) throw InvalidArgument("mesh has no simplices");

  if (kind_ == MeshKind::sphere) {
    for (Index i = 0; i < n; ++i) {
      Point& v = vertices_[i];
      const double len = norm(v);
      if (!(len > 0.0) || !std::isfinite(len))
        throw InvalidArgument("sphere vertex " + std::to_string(i) + " has zero or invalid norm");
      if (std::abs(len - 1.0) > 4.0 * std::numeric_limits<double>::epsilon())
        for (double& c : v) c /= len;
    }
  }
  for (Index i = 0; i < n; ++i)
    for (double c : vertices_[i])
      if (!std::isfinite(c)) throw InvalidArgument("vertex " + std::to_string(i) + " is not finite");

  measures_.resize(simplices_.size());
  for (std::size_t s = 0; s < simplices_.size(); ++s) {
    Simplex& t = simplices_[s];
    if (k == 2) t[2] = -1;
    for (int a = 0; a < k; ++a) {
      if (t[a] < 0 || t[a] >= n)
        throw InvalidArgument("simplex " + std::to_string(s) + " index " + std::to_string(t[a]) +
                              " out of range");
    }
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        if (t[a] == t[b]) throw InvalidArgument("degenerate simplex " + std::to_string(s) + " (repeated vertex)");

    const Point& p0 = vertices_[t[0]];
    const Point& p1 = vertices_[t[1]];
    double measure = 0.0;
    double scale = 0.0;
    if (kind_ == MeshKind::interval) {
      measure = std::abs(p1[0] - p0[0]);
      scale = std::max(std::abs(p0[0]), std::abs(p1[0]));
      if (p1[0] < p0[0]) std::swap(t[0], t[1]);
    } else {
      const Point& p2 = vertices_[t[2]];
      const double e = std::max({norm(sub(p1, p0)), norm(sub(p2, p1)), norm(sub(p0, p2))});
      scale = e * e;
      if (kind_ == MeshKind::planar) {
        const double a = planar_signed_area(p0, p1, p2);
        if (a < 0.0) std::swap(t[1], t[2]);
        measure = std::abs(a);
      } else {
        const Point nrm = cross(sub(p1, p0), sub(p2, p0));
        const Point mid{p0[0] + p1[0] + p2[0], p0[1] + p1[1] + p2[1], p0[2] + p1[2] + p2[2]};
        if (dot(nrm, mid) < 0.0) std::swap(t[1], t[2]);
        measure = 0.5 * norm(nrm);
      }
    }
    if (!(measure > 1e-14 * scale) || measure == 0.0)
      throw InvalidArgument("degenerate simplex " + std::to_string(s) + " (zero measure)");
    measures_[s] = measure;
  }

  // Boundary: facets (edges, or endpoints for intervals) owned by exactly one simplex.
  boundary_.assign(static_cast<std::size_t>(n), false);
  DisjointSets sets(n);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  if (kind_ == MeshKind::interval) {
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    for (const auto& t : simplices_) {
      ++count[t[0]];
      ++count[t[1]];
      used[t[0]] = used[t[1]] = true;
      sets.unite(t[0], t[1]);
    }
    for (Index i = 0; i < n; ++i) boundary_[i] = count[i] == 1;
  } else {
    std::map<std::pair<Index, Index>, int> edges;
    for (const auto& t : simplices_) {
      for (int a = 0; a < 3; ++a) {
        const Index u = t[a];
        const Index v = t[(a + 1) % 3];
        ++edges[{std::min(u, v), std::max(u, v)}];
        used[u] = true;
      }
    }
    for (const auto& [e, c] : edges) {
      if (c == 1) boundary_[e.first] = boundary_[e.second] = true;
    }
  }
  for (Index i = 0; i < n; ++i)
    if (!used[i]) throw InvalidArgument("vertex " + std::to_string(i) + " belongs to no simplex (disconnected)");

  if (kind_ != MeshKind::interval) {
    // Edge-connectivity of triangles: union triangles through shared edges.
    std::map<std::pair<Index, Index>, Index> owner;
    DisjointSets tri_sets(num_simplices());
    for (Index s = 0; s < num_simplices(); ++s) {
      const auto& t = simplices_[s];
      for (int a = 0; a < 3; ++a) {
        const std::pair<Index, Index> e{std::min(t[a], t[(a + 1) % 3]), std::max(t[a], t[(a + 1) % 3])};
        auto [it, inserted] = owner.emplace(e, s);
        if (!inserted) tri_sets.unite(it->second, s);
      }
    }
    for (Index s = 1; s < num_simplices(); ++s)
      if (tri_sets.find(s) != tri_sets.find(0)) throw InvalidArgument("mesh is not edge-connected");
  } else {
    for (Index i = 1; i < n; ++i)
      if (sets.find(i) != sets.find(0)) throw InvalidArgument("mesh is not connected");
  }
}

double Mesh::total_measure() const {
  double s = 0.0;
  for (double m : measures_) s += m;
  return s;
}

Point Mesh::centroid(Index s) const {
  const auto& t = simplices_[s];
  const int k = simplex_size();
  Point c{0.0, 0.0, 0.0};
  for (int a = 0; a < k; ++a)
    for (int d = 0; d < 3; ++d) c[d] += vertices_[t[a]][d] / k;
  return c;
}

// ---------------------------------------------------------------------------
// File format

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  // Next non-empty, comment-stripped line.
  bool next(std::string& out) {
    while (pos_ <= text_.size()) {
      if (pos_ == text_.size()) {
        pos_ = text_.size() + 1;
        return false;
      }
      const std::size_t end = std::min(text_.find('\n', pos_), text_.size());
      std::string line(text_.substr(pos_, end - pos_));
      pos_ = end + 1;
      ++line_no_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out = line;
      return true;
    }
    return false;
  }

  std::size_t line() const { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

template <class T>
std::vector<T> parse_fields(const std::string& line, std::size_t line_no, std::size_t expected) {
  std::istringstream in(line);
  std::vector<T> out;
  T v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw ParseError(line_no, "invalid number");
  if (out.size() != expected)
    throw ParseError(line_no, "expected " + std::to_string(expected) + " values, found " + std::to_string(out.size()));
  return out;
}

}  // namespace

Mesh load_mesh(std::string_view text) {
  LineReader reader(text);
  std::string line;
  if (!reader.next(line)) throw ParseError(reader.line(), "missing mesh kind");
  std::istringstream kind_in(line);
  std::string kind_name;
  kind_in >> kind_name;
  MeshKind kind;
  if (kind_name == "interval")
    kind = MeshKind::interval;
  else if (kind_name == "planar")
    kind = MeshKind::planar;
  else if (kind_name == "sphere")
    kind = MeshKind::sphere;
  else
    throw ParseError(reader.line(), "unknown mesh kind '" + kind_name + "'");
  const std::size_t ncoord = kind == MeshKind::interval ? 1 : kind == MeshKind::planar ? 2 : 3;
  const std::size_t nidx = kind == MeshKind::interval ? 2 : 3;

  auto read_count = [&](const char* what) {
    if (!reader.next(line)) throw ParseError(reader.line(), std::string("missing ") + what + " count");
    const auto v = parse_fields<long long>(line, reader.line(), 1);
    if (v[0] < 0) throw ParseError(reader.line(), std::string("negative ") + what + " count");
    return static_cast<Index>(v[0]);
  };

  const Index n = read_count("vertex");
  std::vector<Point> vertices(static_cast<std::size_t>(n), Point{0.0, 0.0, 0.0});
  for (Index i = 0; i < n; ++i) {
    if (!reader.next(line)) throw ParseError(reader.line(), "missing vertex line");
    const auto c = parse_fields<double>(line, reader.line(), ncoord);
    for (std::size_t d = 0; d < ncoord; ++d) vertices[i][d] = c[d];
  }
  const Index m = read_count("simplex");
  std::vector<Simplex> simplices(static_cast<std::size_t>(m), Simplex{-1, -1, -1});
  for (Index s = 0; s < m; ++s) {
    if (!reader.next(line)) throw ParseError(reader.line(), "missing simplex line");
    const auto idx = parse_fields<long long>(line, reader.line(), nidx);
    for (std::size_t a = 0; a < nidx; ++a) {
      if (idx[a] < 0 || idx[a] >= n)
        throw ParseError(reader.line(), "vertex index " + std::to_string(idx[a]) + " out of range");
      simplices[s][a] = static_cast<Index>(idx[a]);
    }
  }
  if (reader.next(line)) throw ParseError(reader.line(), "trailing content after simplices");
  return Mesh(kind, std::move(vertices), std::move(simplices));
}

Mesh read_mesh_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mesh file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_mesh(buf.str());
}

std::string save_mesh(const Mesh& mesh) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << to_string(mesh.kind()) << "\n" << mesh.num_vertices() << "\n";
  const int ncoord = mesh.kind() == MeshKind::interval ? 1 : mesh.kind() == MeshKind::planar ? 2 : 3;
  for (const auto& v : mesh.vertices()) {
    for (int d = 0; d < ncoord; ++d) out << (d ? " " : "") << v[d];
    out << "\n";
  }
  out << mesh.num_simplices() << "\n";
  for (const auto& t : mesh.simplices()) {
    for (int a = 0; a < mesh.simplex_size(); ++a) out << (a ? " " : "") << t[a];
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Basis evaluation

namespace {

constexpr double kInsideTol = 1e-12;

// Barycentric weights of `p` in simplex s, or false when p lies outside.
bool barycentric(const Mesh& mesh, Index s, const Point& p, std::array<double, 3>& w) {
  const auto& t = mesh.simplex(s);
  if (mesh.kind() == MeshKind::interval) {
    const double a = mesh.vertex(t[0])[0];
    const double b = mesh.vertex(t[1])[0];
    const double len = b - a;
    const double x = p[0];
    if (x < a - kInsideTol * len || x > b + kInsideTol * len) return false;
    w = {(b - x) / len, (x - a) / len, 0.0};
  } else {
    const Point& a = mesh.vertex(t[0]);
    const Point& b = mesh.vertex(t[1]);
    const Point& c = mesh.vertex(t[2]);
    Point q = p;
    if (mesh.kind() == MeshKind::sphere) {
      // Gnomonic projection onto the plane of the facet.
      const Point nrm = cross(sub(b, a), sub(c, a));
      const double np = dot(nrm, p);
      if (!(np > 0.0)) return false;
      const double f = dot(nrm, a) / np;
      q = {p[0] * f, p[1] * f, p[2] * f};
    }
    const Point v0 = sub(b, a), v1 = sub(c, a), v2 = sub(q, a);
    const double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
    const double d20 = dot(v2, v0), d21 = dot(v2, v1);
    const double den = d00 * d11 - d01 * d01;
    const double l1 = (d11 * d20 - d01 * d21) / den;
    const double l2 = (d00 * d21 - d01 * d20) / den;
    w = {1.0 - l1 - l2, l1, l2};
  }
  const int k = mesh.simplex_size();
  for (int a = 0; a < k; ++a)
    if (w[a] < -kInsideTol) return false;
  double sum = 0.0;
  for (int a = 0; a < k; ++a) {
    if (w[a] < 0.0) w[a] = 0.0;
    sum += w[a];
  }
  for (int a = 0; a < k; ++a) w[a] /= sum;
  return true;
}

// Uniform grid over the vertex bounding box; each cell lists the simplices
// whose (padded) bounding box overlaps it, in ascending order.
class SimplexGrid {
 public:
  explicit SimplexGrid(const Mesh& mesh) {
    dims_ = mesh.kind() == MeshKind::interval ? 1 : mesh.kind() == MeshKind::planar ? 2 : 3;
    lo_.fill(0.0);
    hi_.fill(0.0);
    for (int d = 0; d < dims_; ++d) {
      lo_[d] = std::numeric_limits<double>::infinity();
      hi_[d] = -lo_[d];
    }
    for (const auto& v : mesh.vertices())
      for (int d = 0; d < dims_; ++d) {
        lo_[d] = std::min(lo_[d], v[d]);
        hi_[d] = std::max(hi_[d], v[d]);
      }
    const double target = std::max<double>(1.0, static_cast<double>(mesh.num_simplices()));
    const Index per_dim = std::max<Index>(1, static_cast<Index>(std::ceil(std::pow(target, 1.0 / dims_))));
    cells_.fill(1);
    for (int d = 0; d < dims_; ++d) {
      const double pad = 1e-9 * std::max(1.0, hi_[d] - lo_[d]);
      lo_[d] -= pad;
      hi_[d] += pad;
      cells_[d] = per_dim;
    }
    buckets_.resize(static_cast<std::size_t>(cells_[0] * cells_[1] * cells_[2]));
    for (Index s = 0; s < mesh.num_simplices(); ++s) {
      const auto& t = mesh.simplex(s);
      std::array<double, 3> blo{}, bhi{};
      for (int d = 0; d < dims_; ++d) {
        blo[d] = std::numeric_limits<double>::infinity();
        bhi[d] = -blo[d];
      }
      double edge = 0.0;
      for (int a = 0; a < mesh.simplex_size(); ++a) {
        const Point& v = mesh.vertex(t[a]);
        for (int d = 0; d < dims_; ++d) {
          blo[d] = std::min(blo[d], v[d]);
          bhi[d] = std::max(bhi[d], v[d]);
        }
        edge = std::max(edge, norm(sub(v, mesh.vertex(t[(a + 1) % mesh.simplex_size()]))));
      }
      // Spherical facets bulge outward of their flat bounding box.
      const double pad = mesh.kind() == MeshKind::sphere ? edge : 1e-9 * std::max(1.0, edge);
      std::array<Index, 3> c0{0, 0, 0}, c1{0, 0, 0};
      for (int d = 0; d < dims_; ++d) {
        c0[d] = cell_of(d, blo[d] - pad);
        c1[d] = cell_of(d, bhi[d] + pad);
      }
      for (Index i = c0[0]; i <= c1[0]; ++i)
        for (Index j = c0[1]; j <= c1[1]; ++j)
          for (Index k = c0[2]; k <= c1[2]; ++k) buckets_[flat(i, j, k)].push_back(s);
    }
  }

  const std::vector<Index>* candidates(const Point& p) const {
    std::array<Index, 3> c{0, 0, 0};
    for (int d = 0; d < dims_; ++d) {
      if (p[d] < lo_[d] || p[d] > hi_[d]) return nullptr;
      c[d] = cell_of(d, p[d]);
    }
    return &buckets_[flat(c[0], c[1], c[2])];
  }

 private:
  Index cell_of(int d, double x) const {
    const double f = (x - lo_[d]) / (hi_[d] - lo_[d]);
    const auto c = static_cast<Index>(std::floor(f * static_cast<double>(cells_[d])));
    return std::clamp<Index>(c, 0, cells_[d] - 1);
  }
  std::size_t flat(Index i, Index j, Index k) const {
    return static_cast<std::size_t>((k * cells_[1] + j) * cells_[0] + i);
  }

  int dims_ = 1;
  std::array<double, 3> lo_{}, hi_{};
  std::array<Index, 3> cells_{1, 1, 1};
  std::vector<std::vector<Index>> buckets_;
};

constexpr double kBruteForceLimit = 1e7;

}  // namespace

Index ProjectionMatrix::exterior_count() const {
  return static_cast<Index>(std::count(exterior.begin(), exterior.end(), true));
}

ProjectionMatrix evaluate_basis(const Mesh& mesh, std::span<const Point> points) {
  const Index np = static_cast<Index>(points.size());
  const bool brute = static_cast<double>(np) * static_cast<double>(mesh.num_simplices()) <= kBruteForceLimit;
  std::optional<SimplexGrid> grid;
  if (!brute) grid.emplace(mesh);

  std::vector<Triplet> entries;
  entries.reserve(points.size() * 3);
  ProjectionMatrix out;
  out.exterior.assign(points.size(), true);
  std::array<double, 3> w{};
  for (Index i = 0; i < np; ++i) {
    Point p = points[i];
    if (mesh.kind() == MeshKind::sphere) {
      const double len = norm(p);
      if (len > 0.0)
        for (double& c : p) c /= len;
    }
    auto try_simplex = [&](Index s) {
      if (!barycentric(mesh, s, p, w)) return false;
      const auto& t = mesh.simplex(s);
      for (int a = 0; a < mesh.simplex_size(); ++a)
        if (w[a] != 0.0) entries.push_back({i, t[a], w[a]});
      out.exterior[i] = false;
      return true;
    };
    if (brute) {
      for (Index s = 0; s < mesh.num_simplices(); ++s)
        if (try_simplex(s)) break;
    } else if (const auto* cand = grid->candidates(p)) {
      for (Index s : *cand)
        if (try_simplex(s)) break;
    }
  }
  out.matrix = SparseMatrix::from_triplets(np, mesh.num_vertices(), entries);
  return out;
}

Vector vertex_weights(const Mesh& mesh) {
  Vector w = Vector::Zero(mesh.num_vertices());
  const int k = mesh.simplex_size();
  for (Index s = 0; s < mesh.num_simplices(); ++s) {
    const double share = mesh.simplex_measure(s) / k;
    for (int a = 0; a < k; ++a) w[mesh.simplex(s)[a]] += share;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Generators

Mesh make_interval_mesh(double a, double b, Index segments) {
  if (segments < 1 || !(b > a)) throw InvalidArgument("make_interval_mesh: need b > a and segments >= 1");
  std::vector<Point> v;
  std::vector<Simplex> s;
  for (Index i = 0; i <= segments; ++i)
    v.push_back({a + (b - a) * static_cast<double>(i) / static_cast<double>(segments), 0.0, 0.0});
  for (Index i = 0; i < segments; ++i) s.push_back({i, i + 1, -1});
  return Mesh(MeshKind::interval, std::move(v), std::move(s));
}

Mesh make_grid_mesh(double x0, double x1, double y0, double y1, Index nx, Index ny, GridDiagonal diagonal) {
  if (nx < 1 || ny < 1 || !(x1 > x0) || !(y1 > y0)) throw InvalidArgument("make_grid_mesh: bad extent");
  std::vector<Point> v;
  std::vector<Simplex> s;
  for (Index j = 0; j <= ny; ++j)
    for (Index i = 0; i <= nx; ++i)
      v.push_back({x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(nx),
                   y0 + (y1 - y0) * static_cast<double>(j) / static_cast<double>(ny), 0.0});
  auto id = [nx](Index i, Index j) { return j * (nx + 1) + i; };
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) {
      const Index a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      const bool flip = diagonal == GridDiagonal::alternating && ((i + j) % 2 == 1);
      if (!flip) {
        s.push_back({a, b, c});
        s.push_back({a, c, d});
      } else {
        s.push_back({a, b, d});
        s.push_back({b, c, d});
      }
    }
  return Mesh(MeshKind::planar, std::move(v), std::move(s));
}

Mesh make_icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Point> v = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                          {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                          {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : v) {
    const double len = norm(p);
    for (double& c : p) c /= len;
  }
  std::vector<Simplex> s = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                            {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                            {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                            {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return Mesh(MeshKind::sphere, std::move(v), std::move(s));
}

Mesh make_icosphere(int refinements) {
  if (refinements < 0) throw InvalidArgument("make_icosphere: negative refinement count");
  Mesh base = make_icosahedron();
  std::vector<Point> v = base.vertices();
  std::vector<Simplex> s = base.simplices();
  for (int r = 0; r < refinements; ++r) {
    std::map<std::pair<Index, Index>, Index> midpoint;
    auto mid = [&](Index a, Index b) {
      const std::pair<Index, Index> key{std::min(a, b), std::max(a, b)};
      if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
      Point m{v[a][0] + v[b][0], v[a][1] + v[b][1], v[a][2] + v[b][2]};
      const double len = norm(m);
      for (double& c : m) c /= len;
      v.push_back(m);
      const Index id = static_cast<Index>(v.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Simplex> next;
    next.reserve(s.size() * 4);
    for (const auto& t : s) {
      const Index ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    s = std::move(next);
  }
  return Mesh(MeshKind::sphere, std::move(v), std::move(s));
}

}  // namespace spdekit
