#ifndef DIRCLUST_REPRESENTABLE_HPP
#define DIRCLUST_REPRESENTABLE_HPP

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dirclust/common.hpp"
#include "dirclust/core.hpp"
#include "dirclust/minimax.hpp"

namespace dirclust {

/// Default cap on node maps enumerated per representer (|X|^k).
inline constexpr unsigned long long kDefaultBudget = 10'000'000ULL;

template <typename Scalar>
struct Arc {
  Index from;
  Index to;
  Scalar weight;
};

template <typename Scalar>
struct LabeledArc {
  std::string from;
  std::string to;
  Scalar weight;
};

/// A small directed template network whose dissimilarity is only partially
/// defined: `arcs` lists the defined ordered pairs. Always has at least two
/// nodes, at least one arc, positive finite weights, and is weakly connected.
template <typename Scalar>
class Representer {
 public:
  Representer(Unchecked, std::vector<std::string> nodes, std::vector<Arc<Scalar>> arcs)
      : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
    sep_ = max_arc_ = arcs_.front().weight;
    for (const auto& arc : arcs_) {
      if (arc.weight < sep_) sep_ = arc.weight;
      if (max_arc_ < arc.weight) max_arc_ = arc.weight;
    }
  }

  Index size() const { return static_cast<Index>(nodes_.size()); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Arc<Scalar>>& arcs() const { return arcs_; }
  /// Smallest defined arc value.
  const Scalar& sep() const { return sep_; }
  const Scalar& max_arc() const { return max_arc_; }

 private:
  std::vector<std::string> nodes_;
  std::vector<Arc<Scalar>> arcs_;
  Scalar sep_;
  Scalar max_arc_;
};

template <typename Scalar>
class RepresenterFamily {
 public:
  RepresenterFamily(Unchecked, std::vector<Representer<Scalar>> members)
      : members_(std::move(members)) {
    sep_ = members_.front().sep();
    d_max_ = members_.front().max_arc();
    for (const auto& m : members_) {
      if (m.sep() < sep_) sep_ = m.sep();
      if (d_max_ < m.max_arc()) d_max_ = m.max_arc();
    }
  }

  const std::vector<Representer<Scalar>>& members() const { return members_; }
  const Scalar& sep() const { return sep_; }
  const Scalar& d_max() const { return d_max_; }

 private:
  std::vector<Representer<Scalar>> members_;
  Scalar sep_;
  Scalar d_max_;
};

/// Total assignment of representer nodes (by position) to network nodes.
struct NodeMap {
  std::vector<Index> assignment;
};

template <typename Scalar>
Representer<Scalar> validate_representer(std::vector<std::string> nodes,
                                         std::vector<Arc<Scalar>> arcs) {
  const Index k = static_cast<Index>(nodes.size());
  if (k < 2) throw Error(ErrorKind::TooFewNodes, "representer needs at least 2 nodes");
  detail::check_labels(nodes, k);
  if (arcs.empty()) throw Error(ErrorKind::NoArcs, "representer defines no arcs");

  std::vector<char> seen(static_cast<std::size_t>(k * k), 0);
  detail::Components components(k);
  for (const auto& arc : arcs) {
    if (arc.from < 0 || arc.from >= k || arc.to < 0 || arc.to >= k)
      throw Error(ErrorKind::UnknownLabel, "arc endpoint out of range");
    const std::string name = nodes[arc.from] + "->" + nodes[arc.to];
    if (arc.from == arc.to) throw Error(ErrorKind::SelfArc, "arc " + name);
    if (!is_finite(arc.weight)) throw Error(ErrorKind::NonFinite, "arc " + name);
    if (!(Scalar(0) < arc.weight)) throw Error(ErrorKind::NonPositiveArc, "arc " + name);
    char& slot = seen[static_cast<std::size_t>(arc.from * k + arc.to)];
    if (slot) throw Error(ErrorKind::DuplicateArc, "arc " + name + " defined twice");
    slot = 1;
    components.unite(arc.from, arc.to);
  }
  for (Index z = 1; z < k; ++z)
    if (components.find(z) != 0)
      throw Error(ErrorKind::NotWeaklyConnected, "node '" + nodes[z] + "' is not reachable");
  return Representer<Scalar>(unchecked, std::move(nodes), std::move(arcs));
}

template <typename Scalar>
Representer<Scalar> validate_representer(std::vector<std::string> nodes,
                                         const std::vector<LabeledArc<Scalar>>& arcs) {
  std::unordered_map<std::string, Index> position;
  for (std::size_t i = 0; i < nodes.size(); ++i) position.emplace(nodes[i], static_cast<Index>(i));
  auto lookup = [&](const std::string& label) {
    auto it = position.find(label);
    if (it == position.end())
      throw Error(ErrorKind::UnknownLabel, "arc endpoint '" + label + "' is not a node");
    return it->second;
  };
  std::vector<Arc<Scalar>> indexed;
  indexed.reserve(arcs.size());
  for (const auto& arc : arcs) indexed.push_back({lookup(arc.from), lookup(arc.to), arc.weight});
  return validate_representer(std::move(nodes), std::move(indexed));
}

template <typename Scalar>
RepresenterFamily<Scalar> make_family(std::vector<Representer<Scalar>> members) {
  if (members.empty()) throw Error(ErrorKind::EmptyFamily, "a family needs at least one member");
  return RepresenterFamily<Scalar>(unchecked, std::move(members));
}

/// Two nodes, both arcs defined at 1.
template <typename Scalar>
Representer<Scalar> reciprocal_representer() {
  return validate_representer<Scalar>({"z0", "z1"}, std::vector<Arc<Scalar>>{
                                                        {0, 1, Scalar(1)}, {1, 0, Scalar(1)}});
}

/// Three-node cycle: forward arcs z0->z1->z2->z0 at 1, reverse arcs at `ratio`.
template <typename Scalar>
Representer<Scalar> cycle3_representer(const Scalar& ratio) {
  return validate_representer<Scalar>(
      {"z0", "z1", "z2"},
      std::vector<Arc<Scalar>>{{0, 1, Scalar(1)}, {1, 2, Scalar(1)}, {2, 0, Scalar(1)},
                               {1, 0, ratio}, {2, 1, ratio}, {0, 2, ratio}});
}

/// Directed cycles of every length 2..max_len with forward arcs at 1 and
/// reverse arcs undefined.
template <typename Scalar>
RepresenterFamily<Scalar> cycle_family(long max_len) {
  if (max_len < 2)
    throw Error(ErrorKind::InvalidLength, "cycle length must be at least 2");
  std::vector<Representer<Scalar>> members;
  for (long len = 2; len <= max_len; ++len) {
    std::vector<std::string> nodes;
    std::vector<Arc<Scalar>> arcs;
    for (long z = 0; z < len; ++z) {
      nodes.push_back("z" + std::to_string(z));
      arcs.push_back({z, (z + 1) % len, Scalar(1)});
    }
    members.push_back(validate_representer(std::move(nodes), std::move(arcs)));
  }
  return make_family(std::move(members));
}

/// Cycle lengths sufficient for the cycle family to reproduce nonreciprocal
/// clustering on an n-node network: two simple chains joined into a loop.
inline long nonreciprocal_cycle_length(Index n) { return std::max<long>(2, 2 * n - 2); }

/// Smallest multiple of the representer that makes `map` dissimilarity
/// reducing into the network. Collapsed arcs contribute zero.
template <typename Scalar>
Scalar expansion_constant(const NodeMap& map, const Representer<Scalar>& representer,
                          const Network<Scalar>& network) {
  if (static_cast<Index>(map.assignment.size()) != representer.size())
    throw Error(ErrorKind::InvalidNodeMap, "map must assign every representer node");
  for (Index x : map.assignment)
    if (x < 0 || x >= network.size())
      throw Error(ErrorKind::InvalidNodeMap, "map targets a node outside the network");
  Scalar worst(0);
  for (const auto& arc : representer.arcs()) {
    const Scalar ratio = network(map.assignment[arc.from], map.assignment[arc.to]) / arc.weight;
    if (worst < ratio) worst = ratio;
  }
  return worst;
}

namespace detail {

inline unsigned long long map_count(Index n, Index k, unsigned long long budget) {
  unsigned long long total = 1;
  for (Index i = 0; i < k; ++i) {
    if (total > budget / static_cast<unsigned long long>(n))
      throw Error(ErrorKind::ComplexityGuard,
                  std::to_string(n) + "^" + std::to_string(k) +
                      " node maps exceed the budget of " + std::to_string(budget));
    total *= static_cast<unsigned long long>(n);
  }
  return total;
}

/// Depth-first enumeration of all maps from representer nodes to network
/// nodes in mixed-radix order (first representer node most significant).
/// The expansion constant is accumulated as nodes are assigned: an arc is
/// charged at the depth of its later endpoint. `visit(assignment, value)` is
/// called for every complete map; `prune(partial_value)` may cut a subtree
/// whose partial value can no longer matter (values only grow with depth).
template <typename Scalar, typename Visit, typename Prune>
void enumerate_maps(const Representer<Scalar>& representer, const Network<Scalar>& network,
                    unsigned long long budget, Visit&& visit, Prune&& prune) {
  const Index k = representer.size();
  const Index n = network.size();
  map_count(n, k, budget);

  std::vector<std::vector<const Arc<Scalar>*>> closing(static_cast<std::size_t>(k));
  for (const auto& arc : representer.arcs())
    closing[std::max(arc.from, arc.to)].push_back(&arc);

  std::vector<Index> assignment(static_cast<std::size_t>(k), 0);
  std::vector<Scalar> partial(static_cast<std::size_t>(k + 1), Scalar(0));

  // Iterative DFS; `depth` is the representer node being assigned.
  Index depth = 0;
  std::vector<Index> next(static_cast<std::size_t>(k), 0);
  while (depth >= 0) {
    if (next[depth] == n) {
      next[depth] = 0;
      --depth;
      continue;
    }
    assignment[depth] = next[depth]++;
    Scalar value = partial[depth];
    for (const Arc<Scalar>* arc : closing[depth]) {
      const Scalar ratio = network(assignment[arc->from], assignment[arc->to]) / arc->weight;
      if (value < ratio) value = ratio;
    }
    if (prune(value)) continue;
    if (depth + 1 == k) {
      visit(assignment, value);
    } else {
      partial[depth + 1] = value;
      ++depth;
    }
  }
}

template <typename Scalar>
void check_pair(const Network<Scalar>& network, Index x, Index y) {
  if (x < 0 || x >= network.size() || y < 0 || y >= network.size())
    throw Error(ErrorKind::UnknownLabel, "node index out of range");
}

}  // namespace detail

/// Minimum expansion constant over all maps whose image contains x and y.
template <typename Scalar>
Scalar optimal_multiple(const Representer<Scalar>& representer, const Network<Scalar>& network,
                        Index x, Index y, unsigned long long budget = kDefaultBudget) {
  detail::check_pair(network, x, y);
  if (x == y) return Scalar(0);
  bool found = false;
  Scalar best(0);
  detail::enumerate_maps(
      representer, network, budget,
      [&](const std::vector<Index>& assignment, const Scalar& value) {
        const bool hits_x = std::find(assignment.begin(), assignment.end(), x) != assignment.end();
        const bool hits_y = std::find(assignment.begin(), assignment.end(), y) != assignment.end();
        if (hits_x && hits_y && (!found || value < best)) {
          best = value;
          found = true;
        }
      },
      [&](const Scalar& partial) { return found && !(partial < best); });
  return best;
}

/// Entrywise minimum, over family members, of the optimal multiples. The
/// result is symmetric with zero diagonal.
template <typename Scalar>
Matrix<Scalar> lambda_family(const RepresenterFamily<Scalar>& family,
                             const Network<Scalar>& network,
                             unsigned long long budget = kDefaultBudget) {
  const Index n = network.size();
  Matrix<Scalar> lambda = Matrix<Scalar>::Zero(n, n);
  Matrix<char> known = Matrix<char>::Zero(n, n);
  for (const auto& representer : family.members()) {
    // Fail before any work if some member is over budget.
    detail::map_count(n, representer.size(), budget);
  }
  for (const auto& representer : family.members()) {
    std::vector<Index> image;
    detail::enumerate_maps(
        representer, network, budget,
        [&](const std::vector<Index>& assignment, const Scalar& value) {
          image = assignment;
          std::sort(image.begin(), image.end());
          image.erase(std::unique(image.begin(), image.end()), image.end());
          for (std::size_t a = 0; a < image.size(); ++a) {
            for (std::size_t b = a + 1; b < image.size(); ++b) {
              const Index i = image[a], j = image[b];
              if (!known(i, j)) {
                known(i, j) = 1;
                lambda(i, j) = lambda(j, i) = value;
              } else if (value < lambda(i, j)) {
                lambda(i, j) = lambda(j, i) = value;
              }
            }
          }
        },
        [](const Scalar&) { return false; });
  }
  return lambda;
}

/// Single linkage applied to the optimal-multiple network.
template <typename Scalar>
Ultrametric<Scalar> representable_cluster(const RepresenterFamily<Scalar>& family,
                                          const Network<Scalar>& network,
                                          unsigned long long budget = kDefaultBudget) {
  return single_linkage(
      Network<Scalar>(unchecked, network.labels(), lambda_family(family, network, budget)));
}

/// Closed-form optimal multiples for the three-node cycle representer with
/// reverse ratio r: B(i,j) fixes the unit arc z0->z1 on (i, j) and minimizes
/// over the image k of z2; the result is min(B, Bᵀ).
template <typename Scalar>
Matrix<Scalar> fast_lambda_cycle3(const Network<Scalar>& network, const Scalar& ratio) {
  if (!is_finite(ratio) || !(Scalar(1) < ratio))
    throw Error(ErrorKind::InvalidRatio, "reverse ratio must exceed 1");
  const Matrix<Scalar>& a = network.dissim();
  const Index n = network.size();
  Matrix<Scalar> b(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Scalar fixed = std::max(a(i, j), Scalar(a(j, i) / ratio), detail::less<Scalar>);
      Scalar best(0);
      for (Index k = 0; k < n; ++k) {
        Scalar value = fixed;
        for (const Scalar& term : {Scalar(a(j, k)), Scalar(a(k, i)), Scalar(a(k, j) / ratio),
                                   Scalar(a(i, k) / ratio)})
          if (value < term) value = term;
        if (k == 0 || value < best) best = value;
      }
      b(i, j) = best;
    }
  }
  return min_symmetrize(b);
}

/// Lipschitz constant of the representable method: 1 / sep.
template <typename Scalar>
Scalar stability_constant(const RepresenterFamily<Scalar>& family) {
  return Scalar(1) / family.sep();
}

using Representerd = Representer<double>;
using RepresenterFamilyd = RepresenterFamily<double>;

}  // namespace dirclust

#endif  // DIRCLUST_REPRESENTABLE_HPP
