#include "spdekit/ordering.hpp"

#include "spdekit/error.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <unordered_map>
#include <utility>

namespace spdekit {

std::vector<Index> invert_permutation(const std::vector<Index>& perm) {
  std::vector<Index> inv(perm.size(), -1);
  for (std::size_t k = 0; k < perm.size(); ++k) {
    const Index p = perm[k];
    if (p < 0 || p >= static_cast<Index>(perm.size()) || inv[p] != -1)
      throw InvalidArgument("invert_permutation: not a permutation");
    inv[p] = static_cast<Index>(k);
  }
  return inv;
}

std::vector<Index> compute_ordering(const SparseSymMatrix& pattern, Ordering ordering) {
  if (ordering == Ordering::natural) {
    std::vector<Index> perm(static_cast<std::size_t>(pattern.size()));
    std::iota(perm.begin(), perm.end(), Index{0});
    return perm;
  }
  return approximate_minimum_degree(pattern);
}

namespace {

enum class Status : std::uint8_t { variable, absorbed_variable, element, dead_element };

class QuotientGraph {
 public:
  explicit QuotientGraph(const SparseSymMatrix& pattern)
      : n_(pattern.size()),
        status_(n_, Status::variable),
        weight_(n_, 1),
        degree_(n_, 0),
        vars_(n_),
        elems_(n_),
        members_(n_),
        merged_(n_),
        mark_(n_, -1),
        elem_stamp_(n_, -1),
        elem_external_(n_, 0) {
    const auto cp = pattern.col_ptr();
    const auto ri = pattern.row_idx();
    for (Index j = 0; j < n_; ++j) {
      for (Index p = cp[j]; p < cp[j + 1]; ++p) {
        const Index i = ri[p];
        if (i == j) continue;
        vars_[i].push_back(j);
        vars_[j].push_back(i);
      }
    }
    for (Index i = 0; i < n_; ++i) {
      auto& a = vars_[i];
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
      degree_[i] = static_cast<Index>(a.size());
      queue_.emplace(degree_[i], i);
    }
    alive_weight_ = n_;
  }

  std::vector<Index> run() {
    std::vector<Index> order;
    order.reserve(static_cast<std::size_t>(n_));
    Index stamp = 0;
    while (!queue_.empty()) {
      const Index p = queue_.begin()->second;
      queue_.erase(queue_.begin());
      ++stamp;
      eliminate(p, stamp, order);
    }
    return order;
  }

 private:
  bool is_variable(Index i) const { return status_[i] == Status::variable; }
  bool is_element(Index e) const { return status_[e] == Status::element; }

  void eliminate(Index p, Index stamp, std::vector<Index>& order) {
    // New element p: union of p's variable neighbours and the members of its
    // adjacent elements, which are absorbed.
    std::vector<Index> lp;
    mark_[p] = stamp;
    for (Index i : vars_[p]) {
      if (is_variable(i) && mark_[i] != stamp) {
        mark_[i] = stamp;
        lp.push_back(i);
      }
    }
    for (Index e : elems_[p]) {
      if (!is_element(e)) continue;
      for (Index i : members_[e]) {
        if (is_variable(i) && mark_[i] != stamp) {
          mark_[i] = stamp;
          lp.push_back(i);
        }
      }
      status_[e] = Status::dead_element;
      members_[e].clear();
      members_[e].shrink_to_fit();
    }
    std::sort(lp.begin(), lp.end());

    status_[p] = Status::element;
    vars_[p].clear();
    elems_[p].clear();
    alive_weight_ -= weight_[p];
    order.push_back(p);
    for (Index j : merged_[p]) order.push_back(j);

    // Prune the adjacency of every member: element p now covers L_p.
    for (Index i : lp) {
      queue_.erase({degree_[i], i});
      auto& a = vars_[i];
      a.erase(std::remove_if(a.begin(), a.end(),
                             [&](Index j) { return !is_variable(j) || mark_[j] == stamp; }),
              a.end());
      auto& el = elems_[i];
      el.erase(std::remove_if(el.begin(), el.end(), [&](Index e) { return !is_element(e); }),
               el.end());
      el.push_back(p);
      std::sort(el.begin(), el.end());
    }

    merge_indistinguishable(lp);
    lp.erase(std::remove_if(lp.begin(), lp.end(), [&](Index i) { return !is_variable(i); }),
             lp.end());
    members_[p] = lp;

    Index lp_weight = 0;
    for (Index i : lp) lp_weight += weight_[i];

    // |L_e \ L_p| for every element adjacent to L_p.
    for (Index i : lp) {
      for (Index e : elems_[i]) {
        if (e == p || !is_element(e)) continue;
        if (elem_stamp_[e] != stamp) {
          elem_stamp_[e] = stamp;
          auto& m = members_[e];
          m.erase(std::remove_if(m.begin(), m.end(), [&](Index j) { return !is_variable(j); }),
                  m.end());
          Index w = 0;
          for (Index j : m) w += weight_[j];
          elem_external_[e] = w;
        }
        elem_external_[e] -= weight_[i];
      }
    }

    for (Index i : lp) {
      Index external = lp_weight - weight_[i];
      for (Index j : vars_[i]) external += weight_[j];
      auto& el = elems_[i];
      for (Index e : el) {
        if (e == p || !is_element(e)) continue;
        if (elem_external_[e] == 0) {
          // Aggressive absorption: L_e is a subset of L_p.
          status_[e] = Status::dead_element;
          members_[e].clear();
          continue;
        }
        external += elem_external_[e];
      }
      const Index bound = std::min({alive_weight_ - weight_[i], degree_[i] + lp_weight - weight_[i], external});
      degree_[i] = std::max<Index>(bound, 0);
    }
    for (Index i : lp) {
      auto& el = elems_[i];
      el.erase(std::remove_if(el.begin(), el.end(), [&](Index e) { return !is_element(e); }),
               el.end());
      queue_.emplace(degree_[i], i);
    }
  }

  std::uint64_t adjacency_hash(Index i) const {
    std::uint64_t h = 1469598103934665603ull;
    for (Index j : vars_[i]) h = (h ^ static_cast<std::uint64_t>(j)) * 1099511628211ull;
    h ^= 0x9E3779B97F4A7C15ull;
    for (Index e : elems_[i]) h = (h ^ static_cast<std::uint64_t>(e)) * 1099511628211ull;
    return h;
  }

  // Variables of L_p with identical variable and element adjacency are merged
  // into the lowest-index member of their class.
  void merge_indistinguishable(const std::vector<Index>& lp) {
    std::unordered_map<std::uint64_t, std::vector<Index>> buckets;
    for (Index i : lp) buckets[adjacency_hash(i)].push_back(i);
    for (auto& [hash, bucket] : buckets) {
      if (bucket.size() < 2) continue;
      std::sort(bucket.begin(), bucket.end());
      for (std::size_t a = 0; a < bucket.size(); ++a) {
        const Index i = bucket[a];
        if (!is_variable(i)) continue;
        for (std::size_t b = a + 1; b < bucket.size(); ++b) {
          const Index j = bucket[b];
          if (!is_variable(j) || vars_[j] != vars_[i] || elems_[j] != elems_[i]) continue;
          weight_[i] += weight_[j];
          weight_[j] = 0;
          status_[j] = Status::absorbed_variable;
          merged_[i].push_back(j);
          merged_[i].insert(merged_[i].end(), merged_[j].begin(), merged_[j].end());
          merged_[j].clear();
          vars_[j].clear();
          elems_[j].clear();
        }
      }
    }
  }

  Index n_;
  Index alive_weight_ = 0;
  std::vector<Status> status_;
  std::vector<Index> weight_;
  std::vector<Index> degree_;
  std::vector<std::vector<Index>> vars_;
  std::vector<std::vector<Index>> elems_;
  std::vector<std::vector<Index>> members_;
  std::vector<std::vector<Index>> merged_;
  std::vector<Index> mark_;
  std::vector<Index> elem_stamp_;
  std::vector<Index> elem_external_;
  std::set<std::pair<Index, Index>> queue_;
};

}  // namespace

std::vector<Index> approximate_minimum_degree(const SparseSymMatrix& pattern) {
  if (pattern.size() == 0) return {};
  QuotientGraph graph(pattern);
  return graph.run();
}

}  // namespace spdekit
