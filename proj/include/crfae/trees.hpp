#pragma once

#include <span>
#include <vector>

#include "crfae/arc_matrix.hpp"

namespace crfae {

// One head per token.  heads[k] is the head of token k+1, in [0..n], where 0
// is the artificial root.
struct ParseTree {
  std::vector<int> heads;

  int size() const { return static_cast<int>(heads.size()); }
  int head(int child) const { return heads[child - 1]; }
  bool operator==(const ParseTree&) const = default;
};

enum class TreeSpace { projective, nonprojective };

// Single root, in-range heads, no self loops, every token reaches the root.
bool is_valid_tree(std::span<const int> heads);

// True when no two arcs (root arc included) cross.  Assumes a valid tree.
bool is_projective(std::span<const int> heads);

inline bool is_valid_tree(const ParseTree& t) { return is_valid_tree(t.heads); }
inline bool is_projective(const ParseTree& t) { return is_projective(t.heads); }

// Sum of the arc entries used by the tree.
template <typename Derived>
typename Derived::Scalar tree_score(const Eigen::MatrixBase<Derived>& pot,
                                    const ParseTree& tree) {
  typename Derived::Scalar s = 0;
  for (int j = 1; j <= tree.size(); ++j) s += arc(pot, tree.head(j), j);
  return s;
}

constexpr int kMaxEnumerationLength = 8;

// Every single-root tree over n tokens in the requested space, in
// lexicographic order of head arrays.  Throws for n outside [1..8].
std::vector<ParseTree> enumerate_trees(int n, TreeSpace space);

}  // namespace crfae
