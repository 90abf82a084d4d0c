#include "spdekit/assembly.hpp"

#include "spdekit/error.hpp"

#include <cmath>

namespace spdekit {

namespace {

// Facet-local 2D coordinates of a triangle's vertices, with the first vertex at the origin.
std::array<std::array<double, 2>, 3> local_coordinates(const Mesh& mesh, const Simplex& t) {
  const Point& a = mesh.vertex(t[0]);
  const Point& b = mesh.vertex(t[1]);
  const Point& c = mesh.vertex(t[2]);
  if (mesh.kind() == MeshKind::planar) {
    return {{{0.0, 0.0}, {b[0] - a[0], b[1] - a[1]}, {c[0] - a[0], c[1] - a[1]}}};
  }
  const Point ab{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const Point ac{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const double len = std::sqrt(ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2]);
  const Point e1{ab[0] / len, ab[1] / len, ab[2] / len};
  Point n{ab[1] * ac[2] - ab[2] * ac[1], ab[2] * ac[0] - ab[0] * ac[2], ab[0] * ac[1] - ab[1] * ac[0]};
  const double nl = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  for (double& v : n) v /= nl;
  const Point e2{n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2], n[0] * e1[1] - n[1] * e1[0]};
  auto proj = [&](const Point& v) {
    return std::array<double, 2>{v[0] * e1[0] + v[1] * e1[1] + v[2] * e1[2],
                                 v[0] * e2[0] + v[1] * e2[1] + v[2] * e2[2]};
  };
  return {{{0.0, 0.0}, proj(ab), proj(ac)}};
}

void check_tensor(const Tensor2& h, Index s) {
  const double scale = std::max({std::abs(h[0]), std::abs(h[1]), std::abs(h[2]), std::abs(h[3]), 1.0});
  const bool symmetric = std::abs(h[1] - h[2]) <= 1e-12 * scale;
  const double det = h[0] * h[3] - h[1] * h[2];
  if (!symmetric || !(h[0] > 0.0) || !(det > 1e-12 * scale * scale) || !std::isfinite(det))
    throw InvalidArgument("anisotropy tensor of triangle " + std::to_string(s) +
                          " is not symmetric positive definite");
}

}  // namespace

MassMatrices assemble_mass(const Mesh& mesh) {
  std::vector<Triplet> t;
  const int k = mesh.simplex_size();
  t.reserve(static_cast<std::size_t>(mesh.num_simplices() * k * k));
  for (Index s = 0; s < mesh.num_simplices(); ++s) {
    const auto& tri = mesh.simplex(s);
    const double m = mesh.simplex_measure(s);
    // Exact integrals of products of linear hat functions.
    const double diag = k == 2 ? m / 3.0 : m / 6.0;
    const double off = k == 2 ? m / 6.0 : m / 12.0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b <= a; ++b) t.push_back({tri[a], tri[b], a == b ? diag : off});
  }
  MassMatrices out;
  out.consistent = SparseSymMatrix::from_triplets(mesh.num_vertices(), t);
  out.lumped = vertex_weights(mesh);
  return out;
}

SparseSymMatrix assemble_stiffness(const Mesh& mesh, const std::optional<std::vector<Tensor2>>& anisotropy) {
  if (anisotropy) {
    if (mesh.kind() == MeshKind::interval)
      throw InvalidArgument("anisotropy tensors require a triangulated mesh");
    if (static_cast<Index>(anisotropy->size()) != mesh.num_simplices())
      throw InvalidArgument("anisotropy: expected one tensor per triangle");
    for (Index s = 0; s < mesh.num_simplices(); ++s) check_tensor((*anisotropy)[s], s);
  }
  std::vector<Triplet> t;
  const int k = mesh.simplex_size();
  t.reserve(static_cast<std::size_t>(mesh.num_simplices() * k * k));
  for (Index s = 0; s < mesh.num_simplices(); ++s) {
    const auto& tri = mesh.simplex(s);
    const double m = mesh.simplex_measure(s);
    if (k == 2) {
      const double v = 1.0 / m;
      t.push_back({tri[0], tri[0], v});
      t.push_back({tri[1], tri[0], -v});
      t.push_back({tri[1], tri[1], v});
      continue;
    }
    const auto p = local_coordinates(mesh, tri);
    // Gradients of the barycentric coordinates: rows of the inverse Jacobian.
    const double j00 = p[1][0], j01 = p[2][0], j10 = p[1][1], j11 = p[2][1];
    const double det = j00 * j11 - j01 * j10;
    std::array<std::array<double, 2>, 3> grad;
    grad[1] = {j11 / det, -j01 / det};
    grad[2] = {-j10 / det, j00 / det};
    grad[0] = {-grad[1][0] - grad[2][0], -grad[1][1] - grad[2][1]};
    const Tensor2 h = anisotropy ? (*anisotropy)[s] : Tensor2{1.0, 0.0, 0.0, 1.0};
    for (int a = 0; a < 3; ++a) {
      const double hx = h[0] * grad[a][0] + h[1] * grad[a][1];
      const double hy = h[2] * grad[a][0] + h[3] * grad[a][1];
      for (int b = 0; b <= a; ++b) t.push_back({tri[a], tri[b], m * (hx * grad[b][0] + hy * grad[b][1])});
    }
  }
  return SparseSymMatrix::from_triplets(mesh.num_vertices(), t);
}

FemMatrices assemble_fem(const Mesh& mesh, const std::optional<std::vector<Tensor2>>& anisotropy) {
  MassMatrices mass = assemble_mass(mesh);
  return FemMatrices{std::move(mass.consistent), std::move(mass.lumped), assemble_stiffness(mesh, anisotropy)};
}

}  // namespace spdekit
