#pragma once

#include "spdekit/sparse.hpp"

#include <vector>

namespace spdekit {

enum class Ordering { amd, natural };

// Fill-reducing permutation of a symmetric sparsity pattern. The result lists
// original indices in elimination order: perm[k] is eliminated k-th.
//
// The amd ordering is an approximate minimum degree method on the quotient
// graph: eliminated nodes become elements, degrees are replaced by the usual
// external-degree upper bound, absorbed elements are discarded, and
// indistinguishable variables are merged into supervariables and eliminated
// together. Ties are broken by the lowest index, so a pattern without
// off-diagonal entries keeps its natural order.
std::vector<Index> compute_ordering(const SparseSymMatrix& pattern, Ordering ordering);

std::vector<Index> approximate_minimum_degree(const SparseSymMatrix& pattern);

// inverse[perm[k]] = k.
std::vector<Index> invert_permutation(const std::vector<Index>& perm);

}  // namespace spdekit
