#pragma once

// Partition function and arc marginals of the encoder distribution
// P(y|x) ∝ exp(sum of arc scores) over single-root dependency trees.
//
// Projective trees use an inside-outside pass over Eisner spans; the
// non-projective space uses the Matrix-Tree theorem with the root row
// replaced by root scores, so exactly one token attaches to the root in
// both backends.

#include <cmath>
#include <stdexcept>

#include "crfae/arc_matrix.hpp"

namespace crfae {

template <typename Scalar>
inline Scalar log_add(Scalar a, Scalar b) {
  using std::exp;
  using std::log1p;
  if (a == neg_inf<Scalar>()) return b;
  if (b == neg_inf<Scalar>()) return a;
  if (a < b) std::swap(a, b);
  return a + log1p(exp(b - a));
}

template <typename Scalar>
inline void log_accumulate(Scalar& acc, Scalar v) {
  acc = log_add(acc, v);
}

// Inside tables over token positions 1..n (index 0 unused).  For s < t:
//   right_complete(s,t)   head s, subtree spanning s..t
//   left_complete(s,t)    head t, subtree spanning s..t
//   right_incomplete(s,t) arc s -> t plus the material between them
//   left_incomplete(s,t)  arc t -> s plus the material between them
template <typename Scalar>
struct InsideChart {
  using Table = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Table right_complete, left_complete, right_incomplete, left_incomplete;
  Scalar log_z = neg_inf<Scalar>();
  int n = 0;

  // Log-sum over trees whose root child is j.
  template <typename Derived>
  Scalar root_item(const Eigen::MatrixBase<Derived>& pot, int j) const {
    return arc(pot, 0, j) + left_complete(1, j) + right_complete(j, n);
  }
};

template <typename Derived>
InsideChart<typename Derived::Scalar> inside_projective(
    const Eigen::MatrixBase<Derived>& pot) {
  using Scalar = typename Derived::Scalar;
  const int n = sentence_length(pot);
  if (n == 0) throw std::invalid_argument("empty sentence");

  InsideChart<Scalar> c;
  c.n = n;
  const Scalar ninf = neg_inf<Scalar>();
  c.right_complete.setConstant(n + 1, n + 1, ninf);
  c.left_complete.setConstant(n + 1, n + 1, ninf);
  c.right_incomplete.setConstant(n + 1, n + 1, ninf);
  c.left_incomplete.setConstant(n + 1, n + 1, ninf);
  for (int s = 1; s <= n; ++s) {
    c.right_complete(s, s) = 0;
    c.left_complete(s, s) = 0;
  }

  for (int w = 1; w < n; ++w) {
    for (int s = 1; s + w <= n; ++s) {
      const int t = s + w;
      Scalar split = ninf;
      for (int r = s; r < t; ++r)
        log_accumulate(split, c.right_complete(s, r) + c.left_complete(r + 1, t));
      c.right_incomplete(s, t) = split + arc(pot, s, t);
      c.left_incomplete(s, t) = split + arc(pot, t, s);

      Scalar rc = ninf;
      for (int r = s + 1; r <= t; ++r)
        log_accumulate(rc, c.right_incomplete(s, r) + c.right_complete(r, t));
      c.right_complete(s, t) = rc;

      Scalar lc = ninf;
      for (int r = s; r < t; ++r)
        log_accumulate(lc, c.left_complete(s, r) + c.left_incomplete(r, t));
      c.left_complete(s, t) = lc;
    }
  }

  for (int j = 1; j <= n; ++j) log_accumulate(c.log_z, c.root_item(pot, j));
  return c;
}

template <typename Derived>
typename Derived::Scalar log_partition_projective(
    const Eigen::MatrixBase<Derived>& pot) {
  return inside_projective(pot).log_z;
}

template <typename Derived>
ArcMatrix<typename Derived::Scalar> arc_marginals_projective(
    const Eigen::MatrixBase<Derived>& pot) {
  using Scalar = typename Derived::Scalar;
  using std::exp;
  const auto in = inside_projective(pot);
  const int n = in.n;
  const Scalar ninf = neg_inf<Scalar>();
  if (in.log_z == ninf) throw std::domain_error("no tree has finite score");

  using Table = typename InsideChart<Scalar>::Table;
  Table o_rc = Table::Constant(n + 1, n + 1, ninf);
  Table o_lc = Table::Constant(n + 1, n + 1, ninf);
  Table o_ri = Table::Constant(n + 1, n + 1, ninf);
  Table o_li = Table::Constant(n + 1, n + 1, ninf);

  ArcMatrix<Scalar> mu = ArcMatrix<Scalar>::Zero(n + 1, n);
  for (int j = 1; j <= n; ++j) {
    const Scalar r = arc(pot, 0, j);
    log_accumulate(o_lc(1, j), r + in.right_complete(j, n));
    log_accumulate(o_rc(j, n), r + in.left_complete(1, j));
    mu(0, j - 1) = exp(in.root_item(pot, j) - in.log_z);
  }

  // Wider spans first; within a span, complete items feed the incomplete
  // item of the same span, so they are pushed down before it.
  for (int w = n - 1; w >= 1; --w) {
    for (int s = 1; s + w <= n; ++s) {
      const int t = s + w;
      const Scalar orc = o_rc(s, t);
      if (orc != ninf) {
        for (int r = s + 1; r <= t; ++r) {
          log_accumulate(o_ri(s, r), orc + in.right_complete(r, t));
          if (r < t) log_accumulate(o_rc(r, t), orc + in.right_incomplete(s, r));
        }
      }
      const Scalar olc = o_lc(s, t);
      if (olc != ninf) {
        for (int r = s; r < t; ++r) {
          log_accumulate(o_li(r, t), olc + in.left_complete(s, r));
          if (r > s) log_accumulate(o_lc(s, r), olc + in.left_incomplete(r, t));
        }
      }

      const Scalar through = log_add(o_ri(s, t) + arc(pot, s, t),
                                     o_li(s, t) + arc(pot, t, s));
      if (through != ninf) {
        for (int r = s; r < t; ++r) {
          if (r > s) log_accumulate(o_rc(s, r), through + in.left_complete(r + 1, t));
          if (r + 1 < t) log_accumulate(o_lc(r + 1, t), through + in.right_complete(s, r));
        }
      }

      mu(s, t - 1) = exp(in.right_incomplete(s, t) + o_ri(s, t) - in.log_z);
      mu(t, s - 1) = exp(in.left_incomplete(s, t) + o_li(s, t) - in.log_z);
    }
  }
  return mu;
}

namespace detail {

template <typename Scalar>
struct KirchhoffSystem {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> weights;  // (n+1) x n
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> laplacian;  // n x n
  Scalar log_scale = 0;
};

// Root-row-replaced Laplacian of the column-rescaled exponentiated scores.
// Each tree takes exactly one arc per child column, so subtracting the
// column max shifts log Z by the sum of the maxima.
template <typename Derived>
KirchhoffSystem<typename Derived::Scalar> kirchhoff(
    const Eigen::MatrixBase<Derived>& pot) {
  using Scalar = typename Derived::Scalar;
  using std::exp;
  const int n = sentence_length(pot);
  if (n == 0) throw std::invalid_argument("empty sentence");

  KirchhoffSystem<Scalar> k;
  k.weights.resize(n + 1, n);
  for (int j = 0; j < n; ++j) {
    const Scalar top = pot.col(j).maxCoeff();
    if (top == neg_inf<Scalar>())
      throw std::domain_error("singular Kirchhoff matrix: token " +
                              std::to_string(j + 1) + " has no finite head");
    k.log_scale += top;
    for (int i = 0; i <= n; ++i) k.weights(i, j) = exp(pot(i, j) - top);
  }

  auto& lap = k.laplacian;
  lap.setZero(n, n);
  for (int m = 1; m <= n; ++m) {
    for (int h = 1; h <= n; ++h) {
      if (h == m) continue;
      const Scalar a = k.weights(h, m - 1);
      lap(h - 1, m - 1) -= a;
      lap(m - 1, m - 1) += a;
    }
  }
  for (int m = 1; m <= n; ++m) lap(0, m - 1) = k.weights(0, m - 1);
  return k;
}

}  // namespace detail

template <typename Derived>
typename Derived::Scalar log_partition_nonprojective(
    const Eigen::MatrixBase<Derived>& pot) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::log;
  const auto k = detail::kirchhoff(pot);
  const Eigen::FullPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(
      k.laplacian);
  if (!lu.isInvertible()) throw std::domain_error("singular Kirchhoff matrix");

  Scalar log_det = 0;
  int sign = lu.permutationP().determinant() * lu.permutationQ().determinant();
  const auto& packed = lu.matrixLU();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const Scalar u = packed(i, i);
    if (u < 0) sign = -sign;
    log_det += log(abs(u));
  }
  if (sign < 0) throw std::domain_error("Kirchhoff determinant is not positive");
  return log_det + k.log_scale;
}

template <typename Derived>
ArcMatrix<typename Derived::Scalar> arc_marginals_nonprojective(
    const Eigen::MatrixBase<Derived>& pot) {
  using Scalar = typename Derived::Scalar;
  const auto k = detail::kirchhoff(pot);
  const int n = static_cast<int>(k.laplacian.rows());
  const Eigen::FullPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(
      k.laplacian);
  if (!lu.isInvertible()) throw std::domain_error("singular Kirchhoff matrix");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> inv = lu.inverse();

  // Zero-based: token m sits at row/column m-1 and the replaced row is 0.
  ArcMatrix<Scalar> mu = ArcMatrix<Scalar>::Zero(n + 1, n);
  for (int m = 1; m <= n; ++m) {
    mu(0, m - 1) = k.weights(0, m - 1) * inv(m - 1, 0);
    for (int h = 1; h <= n; ++h) {
      if (h == m) continue;
      const Scalar a = k.weights(h, m - 1);
      Scalar v = 0;
      if (m != 1) v += a * inv(m - 1, m - 1);
      if (h != 1) v -= a * inv(m - 1, h - 1);
      mu(h, m - 1) = v;
    }
  }
  return mu;
}

}  // namespace crfae
