#include "spdekit/assembly.hpp"
#include "spdekit/error.hpp"
#include "spdekit/mesh.hpp"
#include "spdekit/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace spdekit;

namespace {

const char* kSquare = R"(# unit square
planar
4
0 0
1 0
1 1
0 1
2
0 1 2
0 2 3
)";

double row_sum(const SparseMatrix& a, Index r) {
  double s = 0.0;
  for (double v : a.row_values(r)) s += v;
  return s;
}

}  // namespace

TEST(Mesh, LoadsUnitSquare) {
  const Mesh m = load_mesh(kSquare);
  EXPECT_EQ(m.kind(), MeshKind::planar);
  EXPECT_EQ(m.num_vertices(), 4);
  EXPECT_EQ(m.num_simplices(), 2);
  for (Index i = 0; i < 4; ++i) EXPECT_TRUE(m.is_boundary(i));
  EXPECT_DOUBLE_EQ(m.total_measure(), 1.0);
}

TEST(Mesh, LoadsInterval) {
  const Mesh m = load_mesh("interval\n3\n0\n0.5\n1\n2\n0 1\n1 2\n");
  EXPECT_EQ(m.kind(), MeshKind::interval);
  EXPECT_TRUE(m.is_boundary(0));
  EXPECT_FALSE(m.is_boundary(1));
  EXPECT_TRUE(m.is_boundary(2));
  const Vector w = vertex_weights(m);
  EXPECT_DOUBLE_EQ(w[0], 0.25);
  EXPECT_DOUBLE_EQ(w[1], 0.5);
  EXPECT_DOUBLE_EQ(w[2], 0.25);
}

TEST(Mesh, NormalisesPerturbedIcosahedron) {
  const Mesh ico = make_icosahedron();
  std::string text = "sphere\n12\n";
  for (Index i = 0; i < 12; ++i) {
    const double f = 1.0 + (i % 2 ? 1e-9 : -1e-9);
    const Point& p = ico.vertex(i);
    text += std::to_string(p[0] * f) + " " + std::to_string(p[1] * f) + " " + std::to_string(p[2] * f) + "\n";
  }
  text += "20\n";
  for (const auto& s : ico.simplices())
    text += std::to_string(s[0]) + " " + std::to_string(s[1]) + " " + std::to_string(s[2]) + "\n";
  const Mesh m = load_mesh(text);
  EXPECT_EQ(m.num_vertices(), 12);
  EXPECT_EQ(m.num_simplices(), 20);
  for (const Point& p : m.vertices()) EXPECT_NEAR(std::hypot(p[0], p[1], p[2]), 1.0, 1e-12);
}

TEST(Mesh, OrientsPlanarTrianglesCounterClockwise) {
  const Mesh m = load_mesh("planar\n3\n0 0\n0 1\n1 0\n1\n0 1 2\n");
  const Simplex& s = m.simplex(0);
  const Point &a = m.vertex(s[0]), &b = m.vertex(s[1]), &c = m.vertex(s[2]);
  EXPECT_GT((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]), 0.0);
}

TEST(Mesh, Errors) {
  EXPECT_THROW(load_mesh("planar\n3\n0 0\n1 0\n0 1\n1\n0 1 5\n"), Error);
  EXPECT_THROW(load_mesh("planar\n3\n0 0\n1 0\n2 0\n1\n0 1 2\n"), InvalidArgument);  // degenerate
  EXPECT_THROW(load_mesh("planar\n6\n0 0\n1 0\n0 1\n5 5\n6 5\n5 6\n2\n0 1 2\n3 4 5\n"), InvalidArgument);
  try {
    load_mesh("planar\n3\n0 0\n1 0\nx 1\n1\n0 1 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
  EXPECT_THROW(load_mesh("cube\n"), ParseError);
}

TEST(Mesh, SaveLoadRoundTrip) {
  for (const Mesh& m : {make_grid_mesh(0, 1, 0, 2, 3, 4), make_icosphere(1), make_interval_mesh(-1, 2, 7)}) {
    EXPECT_EQ(load_mesh(save_mesh(m)), m);
  }
}

TEST(Basis, VertexCentroidAndMidpoint) {
  const Mesh m = load_mesh(kSquare);
  const std::vector<Point> pts{{1, 1, 0}, {2.0 / 3, 1.0 / 3, 0}};
  const ProjectionMatrix a = evaluate_basis(m, pts);
  EXPECT_EQ(a.matrix.row_indices(0).size(), 1u);
  EXPECT_EQ(a.matrix.row_indices(0)[0], 2);
  EXPECT_DOUBLE_EQ(a.matrix.row_values(0)[0], 1.0);
  for (double v : a.matrix.row_values(1)) EXPECT_NEAR(v, 1.0 / 3, 1e-15);

  const Mesh iv = make_interval_mesh(0, 1, 2);
  const std::vector<Point> mid{{0.25, 0, 0}};
  const ProjectionMatrix b = evaluate_basis(iv, mid);
  EXPECT_NEAR(b.matrix.coeff(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(b.matrix.coeff(0, 1), 0.5, 1e-15);
}

TEST(Basis, ExteriorPointsAreFlagged) {
  const Mesh m = load_mesh(kSquare);
  const std::vector<Point> pts{{0.5, 0.5, 0}, {1.5, 0.5, 0}};
  const ProjectionMatrix a = evaluate_basis(m, pts);
  EXPECT_FALSE(a.exterior[0]);
  EXPECT_TRUE(a.exterior[1]);
  EXPECT_EQ(a.exterior_count(), 1);
  EXPECT_TRUE(a.matrix.row_indices(1).empty());
}

TEST(Basis, PartitionOfUnity) {
  const Mesh m = make_grid_mesh(-1, 2, 0, 1, 13, 7);
  const CounterRng rng(1, 50);
  std::vector<Point> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back({-1 + 3 * rng.uniform(i, 0, 0), rng.uniform(i, 0, 1), 0});
  const ProjectionMatrix a = evaluate_basis(m, pts);
  EXPECT_FALSE(a.has_exterior());
  for (Index r = 0; r < 1000; ++r) {
    EXPECT_NEAR(row_sum(a.matrix, r), 1.0, 1e-12);
    for (double v : a.matrix.row_values(r)) EXPECT_GE(v, 0.0);
  }
}

TEST(Basis, GridIndexPathAgreesWithBruteForce) {
  const Mesh m = make_grid_mesh(0, 1, 0, 1, 100, 100);  // 20000 triangles
  const CounterRng rng(2, 50);
  std::vector<Point> many;
  for (int i = 0; i < 600; ++i) many.push_back({rng.uniform(i, 0, 0), rng.uniform(i, 0, 1), 0});
  const ProjectionMatrix a = evaluate_basis(m, many);  // grid index path
  for (int i = 0; i < 600; i += 37) {
    const std::vector<Point> one{many[i]};
    const ProjectionMatrix b = evaluate_basis(m, one);  // brute force path
    for (Index j : b.matrix.row_indices(0)) EXPECT_NEAR(a.matrix.coeff(i, j), b.matrix.coeff(0, j), 1e-14);
  }
}

TEST(Basis, SpherePoints) {
  const Mesh m = make_icosphere(2);
  const CounterRng rng(3, 50);
  std::vector<Point> pts;
  for (int i = 0; i < 200; ++i) {
    Point p{rng.normal(i, 0), rng.normal(i, 1), rng.normal(i, 2)};
    const double n = std::hypot(p[0], p[1], p[2]);
    pts.push_back({p[0] / n, p[1] / n, p[2] / n});
  }
  const ProjectionMatrix a = evaluate_basis(m, pts);
  EXPECT_FALSE(a.has_exterior());
  for (Index r = 0; r < 200; ++r) EXPECT_NEAR(row_sum(a.matrix, r), 1.0, 1e-12);
}

TEST(VertexWeights, SumToMeasure) {
  EXPECT_DOUBLE_EQ(vertex_weights(load_mesh(kSquare)).sum(), 1.0);
  const Mesh s = make_icosphere(2);
  double area = 0.0;
  for (Index t = 0; t < s.num_simplices(); ++t) {
    const Point &a = s.vertex(s.simplex(t)[0]), &b = s.vertex(s.simplex(t)[1]), &c = s.vertex(s.simplex(t)[2]);
    const Eigen::Vector3d u(b[0] - a[0], b[1] - a[1], b[2] - a[2]), v(c[0] - a[0], c[1] - a[1], c[2] - a[2]);
    area += 0.5 * u.cross(v).norm();
  }
  EXPECT_NEAR(vertex_weights(s).sum(), area, 1e-12);
  EXPECT_LT(area, 4 * std::numbers::pi);
}

TEST(VertexWeights, EqualMassRowSums) {
  for (const Mesh& m : {make_grid_mesh(0, 2, 0, 1, 5, 3), make_icosphere(2), make_interval_mesh(0, 3, 9)}) {
    const MassMatrices c = assemble_mass(m);
    const Vector rows = c.consistent.multiply(Vector::Ones(m.num_vertices()));
    EXPECT_LT((rows - vertex_weights(m)).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}
