#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace crfae {

// Errors raised for malformed input data (bad files, alignment failures).
// Everything else that goes wrong raises a plain std::runtime_error.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arc-indexed dense matrix for a sentence of n tokens: (n+1) rows of heads
// (row 0 is the artificial root) by n columns of children.  The arc
// head -> child (child in 1..n) lives at (head, child - 1).  Self arcs hold
// the -inf sentinel.
template <typename Scalar>
using ArcMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using ArcMatrixd = ArcMatrix<double>;

template <typename Scalar>
constexpr Scalar neg_inf() {
  return -std::numeric_limits<Scalar>::infinity();
}

template <typename Derived>
inline int sentence_length(const Eigen::MatrixBase<Derived>& pot) {
  if (pot.rows() != pot.cols() + 1)
    throw std::invalid_argument("arc matrix must be (n+1) x n, got " +
                                std::to_string(pot.rows()) + " x " +
                                std::to_string(pot.cols()));
  return static_cast<int>(pot.cols());
}

template <typename Derived>
inline auto arc(const Eigen::MatrixBase<Derived>& pot, int head, int child) {
  return pot(head, child - 1);
}

// Sets the self-arc cells of an (n+1) x n matrix to -inf.
template <typename Derived>
inline void mask_self_arcs(Eigen::MatrixBase<Derived>& pot) {
  using Scalar = typename Derived::Scalar;
  for (Eigen::Index j = 1; j <= pot.cols(); ++j)
    pot(j, j - 1) = neg_inf<Scalar>();
}

}  // namespace crfae
