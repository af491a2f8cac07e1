#ifndef DIRCLUST_METHODS_HPP
#define DIRCLUST_METHODS_HPP

#include "dirclust/common.hpp"
#include "dirclust/core.hpp"
#include "dirclust/minimax.hpp"

namespace dirclust {

/// Reciprocal clustering: nodes join at δ when a chain links them with every
/// hop affordable at cost δ in both directions.
template <typename Scalar>
Ultrametric<Scalar> reciprocal(const Network<Scalar>& network) {
  return Ultrametric<Scalar>(unchecked, network.labels(),
                             minmax_closure(max_symmetrize(network.dissim())));
}

/// Nonreciprocal clustering: max of the two directed minimum chain costs,
/// allowing different chains in each direction.
template <typename Scalar>
Ultrametric<Scalar> nonreciprocal(const Network<Scalar>& network) {
  const Matrix<Scalar> directed = minmax_closure(network.dissim());
  return Ultrametric<Scalar>(unchecked, network.labels(), max_symmetrize(directed));
}

/// Reciprocal clustering applied to min-max costs over chains of at most
/// `max_nodes` nodes.
template <typename Scalar>
Ultrametric<Scalar> semi_reciprocal(const Network<Scalar>& network, long max_nodes) {
  const Matrix<Scalar> bounded = bounded_hop_minmax(network.dissim(), max_nodes);
  return Ultrametric<Scalar>(unchecked, network.labels(),
                             minmax_closure(max_symmetrize(bounded)));
}

/// Uses the nonreciprocal value wherever the reciprocal value is <= beta and
/// the reciprocal value elsewhere.
template <typename Scalar>
Ultrametric<Scalar> grafting(const Network<Scalar>& network, const Scalar& beta) {
  if (!is_finite(beta) || !(Scalar(0) < beta))
    throw Error(ErrorKind::NonPositiveBeta, "grafting threshold must be positive and finite");
  const Ultrametric<Scalar> rec = reciprocal(network);
  const Ultrametric<Scalar> nonrec = nonreciprocal(network);
  const Index n = network.size();
  Matrix<Scalar> out(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) out(i, j) = beta < rec(i, j) ? rec(i, j) : nonrec(i, j);
  return Ultrametric<Scalar>(unchecked, network.labels(), std::move(out));
}

}  // namespace dirclust

#endif  // DIRCLUST_METHODS_HPP
