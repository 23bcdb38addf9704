#include "crfae/trees.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace crfae {

bool is_valid_tree(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  if (n == 0) return false;
  int roots = 0;
  for (int j = 1; j <= n; ++j) {
    const int h = heads[j - 1];
    if (h < 0 || h > n || h == j) return false;
    if (h == 0) ++roots;
  }
  if (roots != 1) return false;

  // Head chasing: a path longer than n steps must revisit a node.
  for (int j = 1; j <= n; ++j) {
    int cur = j;
    int steps = 0;
    while (cur != 0) {
      cur = heads[cur - 1];
      if (++steps > n) return false;
    }
  }
  return true;
}

bool is_projective(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  for (int a = 1; a <= n; ++a) {
    const int l1 = std::min(a, heads[a - 1]);
    const int r1 = std::max(a, heads[a - 1]);
    for (int b = 1; b <= n; ++b) {
      if (a == b) continue;
      const int l2 = std::min(b, heads[b - 1]);
      const int r2 = std::max(b, heads[b - 1]);
      if (l1 < l2 && l2 < r1 && r1 < r2) return false;
    }
  }
  return true;
}

std::vector<ParseTree> enumerate_trees(int n, TreeSpace space) {
  if (n < 1 || n > kMaxEnumerationLength)
    throw std::invalid_argument("tree enumeration supports 1 <= n <= " +
                                std::to_string(kMaxEnumerationLength) +
                                ", got " + std::to_string(n));
  std::vector<ParseTree> out;
  std::vector<int> heads(n, 0);
  // Odometer over [0..n]^n.
  while (true) {
    if (is_valid_tree(heads) &&
        (space == TreeSpace::nonprojective || is_projective(heads)))
      out.push_back(ParseTree{heads});
    int k = n - 1;
    while (k >= 0 && heads[k] == n) heads[k--] = 0;
    if (k < 0) break;
    ++heads[k];
  }
  return out;
}

}  // namespace crfae
