#pragma once

#include "spdekit/sparse.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spdekit {

enum class MeshKind { interval, planar, sphere };

std::string_view to_string(MeshKind kind);

// Coordinates are always stored as 3-vectors; unused components are zero.
using Point = std::array<double, 3>;
// Vertex indices of a simplex; the third entry is -1 for interval segments.
using Simplex = std::array<Index, 3>;

// Triangulated domain: an interval, a planar triangulation, or a spherical
// (polyhedral) triangulation with unit-norm vertices. Immutable after
// construction; construction validates and normalises the input.
class Mesh {
 public:
  // Validates indices, degeneracy and connectivity; orients planar triangles
  // counter-clockwise and spherical triangles outward; normalises sphere vertices.
  Mesh(MeshKind kind, std::vector<Point> vertices, std::vector<Simplex> simplices);

  MeshKind kind() const { return kind_; }
  // Intrinsic dimension: 1 for intervals, 2 for planar and spherical meshes.
  int dimension() const { return kind_ == MeshKind::interval ? 1 : 2; }
  // Number of vertices per simplex (2 or 3).
  int simplex_size() const { return kind_ == MeshKind::interval ? 2 : 3; }

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_simplices() const { return static_cast<Index>(simplices_.size()); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  const Point& vertex(Index i) const { return vertices_[i]; }
  const Simplex& simplex(Index s) const { return simplices_[s]; }

  bool is_boundary(Index i) const { return boundary_[i]; }
  const std::vector<bool>& boundary() const { return boundary_; }

  // Length or (flat) area of a simplex.
  double simplex_measure(Index s) const { return measures_[s]; }
  double total_measure() const;
  Point centroid(Index s) const;

  bool operator==(const Mesh& other) const = default;

 private:
  MeshKind kind_;
  std::vector<Point> vertices_;
  std::vector<Simplex> simplices_;
  std::vector<bool> boundary_;
  std::vector<double> measures_;
};

// Mesh file format, '#' starts a comment:
//   kind (interval | planar | sphere)
//   N, then N lines of 1, 2 or 3 coordinates
//   M, then M lines of 2 or 3 zero-based vertex indices
Mesh load_mesh(std::string_view text);
Mesh read_mesh_file(const std::filesystem::path& path);
std::string save_mesh(const Mesh& mesh);

// Basis evaluation matrix: row i holds the barycentric weights of point i in
// its containing simplex. Points outside the domain get an empty row and are
// flagged in `exterior`.
struct ProjectionMatrix {
  SparseMatrix matrix;
  std::vector<bool> exterior;

  Index exterior_count() const;
  bool has_exterior() const { return exterior_count() > 0; }
};

ProjectionMatrix evaluate_basis(const Mesh& mesh, std::span<const Point> points);

// w_j = <psi_j, 1>: sum over incident simplices of measure / (vertices per simplex).
Vector vertex_weights(const Mesh& mesh);

// Test and example meshes.
Mesh make_interval_mesh(double a, double b, Index segments);

enum class GridDiagonal { uniform, alternating };
// Regular (nx x ny)-cell triangulation of a rectangle; vertex (i, j) has index j * (nx + 1) + i.
Mesh make_grid_mesh(double x0, double x1, double y0, double y1, Index nx, Index ny,
                    GridDiagonal diagonal = GridDiagonal::alternating);

Mesh make_icosahedron();
// Icosahedron with each triangle split into four `refinements` times,
// new vertices projected to the unit sphere.
Mesh make_icosphere(int refinements);

}  // namespace spdekit
