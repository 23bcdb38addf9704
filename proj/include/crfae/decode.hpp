#pragma once

// Highest-scoring single-root trees under per-arc potentials.
//
// Ties are broken structurally: candidates are scanned in increasing index
// order and only a strictly better score replaces the incumbent, so the
// smallest head index and the leftmost split win.

#include <stdexcept>
#include <vector>

#include "crfae/arc_matrix.hpp"
#include "crfae/trees.hpp"

namespace crfae {

template <typename Scalar>
struct Decoded {
  ParseTree tree;
  Scalar score;
};

namespace detail {

struct EisnerBackpointers {
  Eigen::MatrixXi right_complete, left_complete, incomplete;
};

inline void eisner_backtrack(const EisnerBackpointers& bp, int s, int t,
                             int item, std::vector<int>& heads) {
  // item: 0 right complete, 1 left complete, 2 right incomplete, 3 left incomplete
  if (s == t) return;
  switch (item) {
    case 0: {
      const int r = bp.right_complete(s, t);
      eisner_backtrack(bp, s, r, 2, heads);
      eisner_backtrack(bp, r, t, 0, heads);
      break;
    }
    case 1: {
      const int r = bp.left_complete(s, t);
      eisner_backtrack(bp, s, r, 1, heads);
      eisner_backtrack(bp, r, t, 3, heads);
      break;
    }
    default: {
      if (item == 2)
        heads[t - 1] = s;
      else
        heads[s - 1] = t;
      const int r = bp.incomplete(s, t);
      eisner_backtrack(bp, s, r, 0, heads);
      eisner_backtrack(bp, r + 1, t, 1, heads);
      break;
    }
  }
}

}  // namespace detail

template <typename Derived>
Decoded<typename Derived::Scalar> eisner_decode(
    const Eigen::MatrixBase<Derived>& pot) {
  using Scalar = typename Derived::Scalar;
  const int n = sentence_length(pot);
  if (n == 0) throw std::invalid_argument("empty sentence");

  const Scalar ninf = neg_inf<Scalar>();
  using Table = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Table rc = Table::Constant(n + 1, n + 1, ninf);
  Table lc = Table::Constant(n + 1, n + 1, ninf);
  Table ri = Table::Constant(n + 1, n + 1, ninf);
  Table li = Table::Constant(n + 1, n + 1, ninf);
  detail::EisnerBackpointers bp;
  bp.right_complete.setConstant(n + 1, n + 1, -1);
  bp.left_complete.setConstant(n + 1, n + 1, -1);
  bp.incomplete.setConstant(n + 1, n + 1, -1);
  for (int s = 1; s <= n; ++s) rc(s, s) = lc(s, s) = 0;

  for (int w = 1; w < n; ++w) {
    for (int s = 1; s + w <= n; ++s) {
      const int t = s + w;
      Scalar best = ninf;
      int arg = s;
      for (int r = s; r < t; ++r) {
        const Scalar v = rc(s, r) + lc(r + 1, t);
        if (v > best) best = v, arg = r;
      }
      ri(s, t) = best + arc(pot, s, t);
      li(s, t) = best + arc(pot, t, s);
      bp.incomplete(s, t) = arg;

      best = ninf;
      arg = s + 1;
      for (int r = s + 1; r <= t; ++r) {
        const Scalar v = ri(s, r) + rc(r, t);
        if (v > best) best = v, arg = r;
      }
      rc(s, t) = best;
      bp.right_complete(s, t) = arg;

      best = ninf;
      arg = s;
      for (int r = s; r < t; ++r) {
        const Scalar v = lc(s, r) + li(r, t);
        if (v > best) best = v, arg = r;
      }
      lc(s, t) = best;
      bp.left_complete(s, t) = arg;
    }
  }

  Scalar best = ninf;
  int root_child = 1;
  for (int j = 1; j <= n; ++j) {
    const Scalar v = arc(pot, 0, j) + lc(1, j) + rc(j, n);
    if (v > best) best = v, root_child = j;
  }

  std::vector<int> heads(n, 0);
  heads[root_child - 1] = 0;
  detail::eisner_backtrack(bp, 1, root_child, 1, heads);
  detail::eisner_backtrack(bp, root_child, n, 0, heads);
  return {ParseTree{std::move(heads)}, best};
}

namespace detail {

// Maximum arborescence rooted at node 0 of a dense score matrix
// (scores(h, d) = arc h -> d, -inf where absent), by recursive cycle
// contraction.  Returns heads for every node; heads[0] = -1.
template <typename Scalar>
std::vector<int> max_arborescence(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& scores) {
  const int m = static_cast<int>(scores.rows());
  const Scalar ninf = neg_inf<Scalar>();
  std::vector<int> heads(m, -1);
  for (int d = 1; d < m; ++d) {
    Scalar best = ninf;
    int arg = 0;
    for (int h = 0; h < m; ++h) {
      if (h == d) continue;
      if (scores(h, d) > best) best = scores(h, d), arg = h;
    }
    heads[d] = arg;
  }

  // Find a cycle among the greedy choices.
  std::vector<int> color(m, 0);  // 0 unseen, >0 id of the walk that saw it
  std::vector<int> cycle;
  for (int start = 1; start < m && cycle.empty(); ++start) {
    int v = start;
    while (v != 0 && color[v] == 0) {
      color[v] = start;
      v = heads[v];
    }
    if (v != 0 && color[v] == start) {
      int u = v;
      do {
        cycle.push_back(u);
        u = heads[u];
      } while (u != v);
    }
  }
  if (cycle.empty()) return heads;

  std::vector<bool> in_cycle(m, false);
  for (int v : cycle) in_cycle[v] = true;
  std::vector<int> to_new(m, -1), to_old;
  for (int v = 0; v < m; ++v) {
    if (in_cycle[v]) continue;
    to_new[v] = static_cast<int>(to_old.size());
    to_old.push_back(v);
  }
  const int c = static_cast<int>(to_old.size());

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sub =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Constant(c + 1, c + 1, ninf);
  std::vector<int> enter(m, -1), leave(m, -1);
  for (int u = 0; u < m; ++u) {
    if (in_cycle[u]) continue;
    for (int w = 1; w < m; ++w)
      if (!in_cycle[w] && w != u) sub(to_new[u], to_new[w]) = scores(u, w);

    Scalar best = ninf;
    for (int v : cycle) {
      if (scores(u, v) == ninf) continue;
      const Scalar gain = scores(u, v) - scores(heads[v], v);
      if (gain > best || enter[u] < 0) best = gain, enter[u] = v;
    }
    sub(to_new[u], c) = best;

    if (u == 0) continue;
    best = ninf;
    for (int v : cycle)
      if (scores(v, u) > best || leave[u] < 0) best = scores(v, u), leave[u] = v;
    sub(c, to_new[u]) = best;
  }

  const std::vector<int> sub_heads = max_arborescence<Scalar>(sub);
  for (int w = 1; w < m; ++w) {
    if (in_cycle[w]) continue;
    const int h = sub_heads[to_new[w]];
    heads[w] = h == c ? leave[w] : to_old[h];
  }
  const int u = to_old[sub_heads[c]];
  heads[enter[u]] = u;
  return heads;
}

}  // namespace detail

template <typename Derived>
Decoded<typename Derived::Scalar> cle_decode(const Eigen::MatrixBase<Derived>& pot) {
  using Scalar = typename Derived::Scalar;
  const int n = sentence_length(pot);
  if (n == 0) throw std::invalid_argument("empty sentence");
  const Scalar ninf = neg_inf<Scalar>();

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> square =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Constant(n + 1, n + 1, ninf);
  square.rightCols(n) = pot;
  for (int d = 1; d <= n; ++d) square(d, d) = ninf;

  Decoded<Scalar> best{ParseTree{std::vector<int>(n, 0)}, ninf};
  bool found = false;
  // One root child at a time: masking the other root arcs makes any
  // arborescence single-rooted.
  for (int r = 1; r <= n; ++r) {
    if (arc(pot, 0, r) == ninf) continue;
    auto masked = square;
    masked.row(0).setConstant(ninf);
    masked(0, r) = arc(pot, 0, r);
    const std::vector<int> h = detail::max_arborescence<Scalar>(masked);
    ParseTree tree{std::vector<int>(h.begin() + 1, h.end())};
    const Scalar s = tree_score(pot, tree);
    if (!found || s > best.score) {
      best = {std::move(tree), s};
      found = true;
    }
  }
  if (!found) throw std::domain_error("no finite root arc");
  return best;
}

template <typename Derived>
Decoded<typename Derived::Scalar> decode(const Eigen::MatrixBase<Derived>& pot,
                                         TreeSpace space) {
  return space == TreeSpace::projective ? eisner_decode(pot) : cle_decode(pot);
}

}  // namespace crfae
