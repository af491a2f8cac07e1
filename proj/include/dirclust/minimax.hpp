#ifndef DIRCLUST_MINIMAX_HPP
#define DIRCLUST_MINIMAX_HPP

#include <algorithm>

#include "dirclust/common.hpp"
#include "dirclust/core.hpp"

namespace dirclust {

// Min-max ("bottleneck") path algebra. Every routine here only selects among
// its input entries, so results are exact for any ordered scalar type.

/// (A ⊗ B)(i, j) = min_k max(A(i, k), B(k, j)).
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> minmax_product(const Eigen::MatrixBase<DerivedA>& a,
                                                 const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.cols() != b.rows())
    throw Error(ErrorKind::ShapeMismatch, "inner dimensions differ in min-max product");
  const Matrix<Scalar> lhs = a;
  const Matrix<Scalar> rhs = b;
  Matrix<Scalar> out(lhs.rows(), rhs.cols());
  for (Index j = 0; j < rhs.cols(); ++j) {
    for (Index i = 0; i < lhs.rows(); ++i) {
      Scalar best = std::max(lhs(i, 0), rhs(0, j), detail::less<Scalar>);
      for (Index k = 1; k < lhs.cols(); ++k) {
        const Scalar& hop = std::max(lhs(i, k), rhs(k, j), detail::less<Scalar>);
        if (hop < best) best = hop;
      }
      out(i, j) = best;
    }
  }
  return out;
}

/// Directed minimum chain cost: entry (i, j) is the smallest achievable
/// maximum link dissimilarity over chains from i to j.
template <typename Derived>
Matrix<typename Derived::Scalar> minmax_closure(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (!is_square(a)) throw Error(ErrorKind::ShapeMismatch, "cost matrix must be square");
  Matrix<Scalar> u = a;
  const Index n = u.rows();
  // In-place Floyd-Warshall is safe: with a zero diagonal, round k never
  // changes row k or column k, so every read in round k sees round k-1 values.
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      const Scalar& kj = u(k, j);
      for (Index i = 0; i < n; ++i) {
        const Scalar& via = u(i, k) < kj ? kj : u(i, k);
        if (via < u(i, j)) u(i, j) = via;
      }
    }
  }
  return u;
}

/// Min-max cost over chains of at most `max_nodes` nodes.
template <typename Derived>
Matrix<typename Derived::Scalar> bounded_hop_minmax(const Eigen::MatrixBase<Derived>& a,
                                                    long max_nodes) {
  using Scalar = typename Derived::Scalar;
  if (max_nodes < 2)
    throw Error(ErrorKind::InvalidHopBound, "chains need at least 2 nodes, got " +
                                                std::to_string(max_nodes));
  if (!is_square(a)) throw Error(ErrorKind::ShapeMismatch, "cost matrix must be square");
  const Matrix<Scalar> base = a;
  // Simple chains never have more than n nodes.
  const long rounds = std::min<long>(max_nodes, static_cast<long>(base.rows())) - 2;
  Matrix<Scalar> m = base;
  for (long r = 0; r < rounds; ++r) m = cwise_min(m, minmax_product(m, base));
  return m;
}

template <typename Scalar>
Ultrametric<Scalar> single_linkage(const Network<Scalar>& network) {
  if (!is_exactly_symmetric(network.dissim()))
    throw Error(ErrorKind::AsymmetricInput, "single linkage needs a symmetric network");
  return Ultrametric<Scalar>(unchecked, network.labels(), minmax_closure(network.dissim()));
}

}  // namespace dirclust

#endif  // DIRCLUST_MINIMAX_HPP
