#pragma once

#include "spdekit/mesh.hpp"
#include "spdekit/sparse.hpp"

#include <array>
#include <optional>
#include <vector>

namespace spdekit {

// Symmetric 2x2 tensor {h00, h01, h10, h11}, row-major. On spherical meshes it
// acts in the facet frame e1 = (b - a)/|b - a|, e2 = n x e1 of triangle (a, b, c).
using Tensor2 = std::array<double, 4>;

// Piecewise-linear finite element matrices: C_ij = <psi_i, psi_j>,
// its lumped diagonal (row sums, equal to <psi_i, 1>), and G_ij = <grad psi_i, grad psi_j>.
struct FemMatrices {
  SparseSymMatrix c_consistent;
  Vector c_lumped;
  SparseSymMatrix g;

  Index size() const { return c_lumped.size(); }
};

struct MassMatrices {
  SparseSymMatrix consistent;
  Vector lumped;
};

MassMatrices assemble_mass(const Mesh& mesh);

// Optional per-triangle tensors replace <grad psi_i, grad psi_j> by
// <H grad psi_i, grad psi_j>. Throws InvalidArgument naming the triangle when a
// tensor is not symmetric positive definite.
SparseSymMatrix assemble_stiffness(const Mesh& mesh,
                                   const std::optional<std::vector<Tensor2>>& anisotropy = std::nullopt);

FemMatrices assemble_fem(const Mesh& mesh,
                         const std::optional<std::vector<Tensor2>>& anisotropy = std::nullopt);

}  // namespace spdekit
