#pragma once

#include "spdekit/rng.hpp"
#include "spdekit/sparse.hpp"

#include <cstdint>
#include <vector>

namespace spdekit::test_support {

// Random sparse SPD matrix: random symmetric pattern with about `per_row`
// off-diagonal entries per row, made diagonally dominant.
inline SparseSymMatrix random_spd(Index n, int per_row, std::uint64_t seed) {
  const CounterRng rng(seed, 99);
  std::vector<Triplet> t;
  Vector diag = Vector::Constant(n, 0.5);
  std::uint64_t k = 0;
  for (Index i = 0; i < n; ++i) {
    for (int e = 0; e < per_row; ++e) {
      const auto j = static_cast<Index>(rng.uniform(k, 0, 0) * static_cast<double>(n));
      const double v = rng.uniform(k, 0, 1) - 0.5;
      ++k;
      if (j == i || j >= n) continue;
      t.push_back({std::max(i, j), std::min(i, j), v});
      diag[i] += std::abs(v);
      diag[j] += std::abs(v);
    }
  }
  for (Index i = 0; i < n; ++i) t.push_back({i, i, diag[i] + rng.uniform(k++, 0, 0)});
  return SparseSymMatrix::from_triplets(n, t);
}

inline Vector random_vector(Index n, std::uint64_t seed) {
  const CounterRng rng(seed, 98);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal(static_cast<std::uint64_t>(i));
  return v;
}

}  // namespace spdekit::test_support
