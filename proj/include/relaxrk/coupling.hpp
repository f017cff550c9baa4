#pragma once

// Counting the order conditions that couple the two tableaux of an IMEX pair.
// Conditions of order q correspond to rooted trees with q nodes whose nodes
// carry one of two colors (which operator the node belongs to).  The root
// contributes a weight vector, non-root leaves contribute abscissae, interior
// nodes contribute coefficient-matrix factors.  Identifying w with w-tilde
// merges the root color; identifying c with c-tilde merges the leaf colors.
// Coupling conditions are the colorings that are not monochromatic.

#include <cstdint>
#include <map>
#include <vector>

#include "relaxrk/errors.hpp"

namespace relaxrk {

enum class CouplingReduction { General, WeightsEqual, AbscissaeEqual, Both };

namespace detail {

// unlabeled rooted tree in canonical form: sorted list of child tree ids
struct RootedTree {
  int size = 1;
  std::vector<int> children;  // ids into the registry, sorted ascending
};

class TreeRegistry {
public:
  explicit TreeRegistry(int max_order) {
    by_size_.resize(max_order + 1);
    intern(RootedTree{1, {}});
    by_size_[1] = {0};
    for (int q = 2; q <= max_order; ++q) {
      std::vector<int> ids;
      std::vector<int> acc;
      enumerate(q - 1, 0, acc, ids);
      by_size_[q] = std::move(ids);
    }
  }

  const RootedTree& tree(int id) const { return trees_[id]; }
  const std::vector<int>& of_order(int q) const { return by_size_[q]; }

private:
  // choose a nondecreasing multiset of existing trees with sizes summing to
  // `remaining`; ids are generated smallest-size-first, so nondecreasing id
  // order is a canonical form
  void enumerate(int remaining, int min_id, std::vector<int>& acc, std::vector<int>& out) {
    if (remaining == 0) {
      RootedTree t;
      t.children = acc;
      t.size = 1;
      for (int id : acc) t.size += trees_[id].size;
      out.push_back(intern(std::move(t)));
      return;
    }
    for (int id = min_id; id < static_cast<int>(trees_.size()); ++id) {
      if (trees_[id].size > remaining) continue;
      acc.push_back(id);
      enumerate(remaining - trees_[id].size, id, acc, out);
      acc.pop_back();
    }
  }

  int intern(RootedTree t) {
    auto key = std::make_pair(t.size, t.children);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(trees_.size());
    trees_.push_back(std::move(t));
    index_.emplace(std::move(key), id);
    return id;
  }

  std::vector<RootedTree> trees_;
  std::vector<std::vector<int>> by_size_;
  std::map<std::pair<int, std::vector<int>>, int> index_;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// multisets of size m drawn from n distinguishable colorings: identical
// sibling subtrees are interchangeable, so their colorings combine as a
// multiset rather than a tuple
inline std::uint64_t multiset_count(std::uint64_t n, std::uint64_t m) {
  return binomial(n + m - 1, m);
}

} // namespace detail

// Number of unlabeled rooted trees with q nodes (1, 1, 2, 4, 9, 20, ... for
// q = 1..6); exposed as the prerequisite oracle for the coloring counts.
inline std::uint64_t rooted_tree_count(int q) {
  if (q < 1 || q > 10) throw invalid_input("rooted_tree_count: order out of range");
  static detail::TreeRegistry reg(10);
  return reg.of_order(q).size();
}

// Cumulative number of coupling conditions through order p under the given
// identification of coefficient vectors.
inline std::uint64_t count_coupling_conditions(int p, CouplingReduction reduction) {
  if (p < 1 || p > 6)
    throw invalid_input("count_coupling_conditions: order must be in 1..6");

  const bool root_merged = reduction == CouplingReduction::WeightsEqual ||
                           reduction == CouplingReduction::Both;
  const bool leaf_merged = reduction == CouplingReduction::AbscissaeEqual ||
                           reduction == CouplingReduction::Both;
  const std::uint64_t root_colors = root_merged ? 1 : 2;
  const std::uint64_t leaf_colors = leaf_merged ? 1 : 2;

  static detail::TreeRegistry reg(6);

  // colorings of a subtree (whose root is a non-root node of the full tree),
  // up to isomorphism; memoized per leaf-color count
  std::map<int, std::uint64_t> memo;
  auto sub_colorings = [&](auto&& self, int id) -> std::uint64_t {
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    const auto& t = reg.tree(id);
    std::uint64_t v;
    if (t.children.empty()) {
      v = leaf_colors;
    } else {
      v = 2;  // interior node: the two matrix factors never merge
      for (std::size_t k = 0; k < t.children.size();) {
        std::size_t m = 1;
        while (k + m < t.children.size() && t.children[k + m] == t.children[k]) ++m;
        v *= detail::multiset_count(self(self, t.children[k]), m);
        k += m;
      }
    }
    memo.emplace(id, v);
    return v;
  };

  auto colored_node_count = [&](auto&& self, int id, bool is_root) -> int {
    const auto& t = reg.tree(id);
    int own;
    if (is_root)
      own = root_merged ? 0 : 1;
    else if (t.children.empty())
      own = leaf_merged ? 0 : 1;
    else
      own = 1;
    for (int ch : t.children) own += self(self, ch, false);
    return own;
  };

  std::uint64_t total = 0;
  for (int q = 1; q <= p; ++q) {
    for (int id : reg.of_order(q)) {
      const auto& t = reg.tree(id);
      std::uint64_t distinct = root_colors;
      for (std::size_t k = 0; k < t.children.size();) {
        std::size_t m = 1;
        while (k + m < t.children.size() && t.children[k + m] == t.children[k]) ++m;
        distinct *= detail::multiset_count(sub_colorings(sub_colorings, t.children[k]), m);
        k += m;
      }
      // monochromatic colorings are the single-tableau conditions: one per
      // color when any node is colored, one (the empty coloring) otherwise
      const int ncolored = colored_node_count(colored_node_count, id, true);
      const std::uint64_t pure = ncolored >= 1 ? 2 : 1;
      total += distinct - pure;
    }
  }
  return total;
}

} // namespace relaxrk
