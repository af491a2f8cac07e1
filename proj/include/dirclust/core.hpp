#ifndef DIRCLUST_CORE_HPP
#define DIRCLUST_CORE_HPP

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dirclust/common.hpp"

namespace dirclust {

/// Tag for constructors that skip validation; the caller guarantees the
/// type's invariants.
struct Unchecked {};
inline constexpr Unchecked unchecked{};

/// A finite directed network: labelled nodes and a total dissimilarity matrix
/// with zero diagonal and strictly positive, finite off-diagonal entries.
/// Entry (i, j) is the dissimilarity from node i to node j; it need not equal
/// entry (j, i).
template <typename Scalar>
class Network {
 public:
  using scalar_type = Scalar;

  Network(Unchecked, std::vector<std::string> labels, Matrix<Scalar> dissim)
      : labels_(std::move(labels)), dissim_(std::move(dissim)) {}

  Index size() const { return dissim_.rows(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Matrix<Scalar>& dissim() const { return dissim_; }
  const Scalar& operator()(Index i, Index j) const { return dissim_(i, j); }

  Index index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
      throw Error(ErrorKind::UnknownLabel, "no node labelled '" + label + "'");
    return static_cast<Index>(it - labels_.begin());
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.labels_ == b.labels_ && a.dissim_.rows() == b.dissim_.rows() &&
           a.dissim_ == b.dissim_;
  }

 private:
  std::vector<std::string> labels_;
  Matrix<Scalar> dissim_;
};

/// Symmetric dissimilarity satisfying u(i,j) <= max(u(i,k), u(k,j)). This is
/// the output type of every clustering method.
template <typename Scalar>
class Ultrametric {
 public:
  using scalar_type = Scalar;

  Ultrametric(Unchecked, std::vector<std::string> labels, Matrix<Scalar> values)
      : labels_(std::move(labels)), values_(std::move(values)) {}

  Index size() const { return values_.rows(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Matrix<Scalar>& values() const { return values_; }
  const Scalar& operator()(Index i, Index j) const { return values_(i, j); }

  /// The ultrametric viewed as a (symmetric) network.
  Network<Scalar> as_network() const { return Network<Scalar>(unchecked, labels_, values_); }

  friend bool operator==(const Ultrametric& a, const Ultrametric& b) {
    return a.labels_ == b.labels_ && a.values_.rows() == b.values_.rows() &&
           a.values_ == b.values_;
  }

 private:
  std::vector<std::string> labels_;
  Matrix<Scalar> values_;
};

/// One merge event: the listed blocks (each a sorted list of leaf indices)
/// fuse into a single block at `resolution`.
template <typename Scalar>
struct Merge {
  Scalar resolution;
  std::vector<std::vector<Index>> blocks;

  friend bool operator==(const Merge& a, const Merge& b) {
    return a.resolution == b.resolution && a.blocks == b.blocks;
  }
};

template <typename Scalar>
struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge<Scalar>> merges;

  friend bool operator==(const Dendrogram& a, const Dendrogram& b) {
    return a.leaves == b.leaves && a.merges == b.merges;
  }
};

template <typename Scalar>
struct Partition {
  std::vector<std::string> labels;
  std::vector<std::vector<Index>> blocks;
  Scalar resolution;

  std::vector<std::vector<std::string>> block_labels() const {
    std::vector<std::vector<std::string>> out;
    out.reserve(blocks.size());
    for (const auto& block : blocks) {
      auto& names = out.emplace_back();
      for (Index i : block) names.push_back(labels[static_cast<std::size_t>(i)]);
    }
    return out;
  }
};

namespace detail {

inline void check_labels(const std::vector<std::string>& labels, Index n) {
  if (static_cast<Index>(labels.size()) != n)
    throw Error(ErrorKind::ShapeMismatch, std::to_string(labels.size()) +
                                              " labels for a matrix of size " +
                                              std::to_string(n));
  std::unordered_set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second)
      throw Error(ErrorKind::DuplicateLabel, "label '" + l + "' appears twice");
}

template <typename Derived>
void check_square(const Eigen::MatrixBase<Derived>& m) {
  if (!is_square(m))
    throw Error(ErrorKind::ShapeMismatch,
                "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  if (m.rows() < 1) throw Error(ErrorKind::ShapeMismatch, "network needs at least one node");
}

// Lightweight union-find over node indices.
class Components {
 public:
  explicit Components(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }
  Index find(Index x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // Keeps the smaller index as root so roots are block minima.
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<Index> parent_;
};

}  // namespace detail

template <typename Derived>
Network<typename Derived::Scalar> validate_network(std::vector<std::string> labels,
                                                   const Eigen::MatrixBase<Derived>& matrix) {
  using Scalar = typename Derived::Scalar;
  detail::check_square(matrix);
  const Index n = matrix.rows();
  detail::check_labels(labels, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Scalar& a = matrix(i, j);
      const std::string where = "(" + labels[i] + ", " + labels[j] + ")";
      if (!is_finite(a)) throw Error(ErrorKind::NonFinite, "entry " + where, {i, j});
      if (i == j) {
        if (!(a == Scalar(0)))
          throw Error(ErrorKind::NonZeroDiagonal, "entry " + where, {i, j});
      } else if (!(Scalar(0) < a)) {
        throw Error(ErrorKind::NonPositiveOffDiagonal, "entry " + where, {i, j});
      }
    }
  }
  return Network<Scalar>(unchecked, std::move(labels), matrix.eval());
}

template <typename Scalar>
Network<Scalar> scale_network(const Network<Scalar>& network, const Scalar& alpha) {
  if (!is_finite(alpha) || !(Scalar(0) < alpha))
    throw Error(ErrorKind::NonPositiveScale, "scale factor must be positive and finite");
  Matrix<Scalar> scaled = network.dissim() * alpha;
  return validate_network(network.labels(), scaled);
}

template <typename Derived>
Ultrametric<typename Derived::Scalar> validate_ultrametric(
    std::vector<std::string> labels, const Eigen::MatrixBase<Derived>& matrix) {
  using Scalar = typename Derived::Scalar;
  using Tol = Tolerance<Scalar>;
  detail::check_square(matrix);
  const Index n = matrix.rows();
  detail::check_labels(labels, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Scalar& a = matrix(i, j);
      if (!is_finite(a))
        throw Error(ErrorKind::NonFinite, "entry (" + labels[i] + ", " + labels[j] + ")", {i, j});
      const bool ok = (i == j) ? a == Scalar(0) : Scalar(0) < a;
      if (!ok)
        throw Error(ErrorKind::IdentityViolation,
                    "u(" + labels[i] + ", " + labels[j] + ") must be 0 iff the nodes coincide",
                    {i, j});
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      using std::abs;
      const Scalar diff = abs(Scalar(matrix(i, j) - matrix(j, i)));
      if (Tol::slack(matrix(i, j), matrix(j, i)) < diff)
        throw Error(ErrorKind::NotSymmetric,
                    "u(" + labels[i] + ", " + labels[j] + ") != u(" + labels[j] + ", " +
                        labels[i] + ")",
                    {i, j});
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      for (Index k = 0; k < n; ++k) {
        const Scalar bound = std::max(matrix(i, k), matrix(k, j),
                                      [](const Scalar& a, const Scalar& b) { return a < b; });
        if (bound + Tol::slack(matrix(i, j), bound) < matrix(i, j))
          throw Error(ErrorKind::StrongTriangleViolation,
                      "u(" + labels[i] + ", " + labels[j] + ") exceeds max(u(" + labels[i] +
                          ", " + labels[k] + "), u(" + labels[k] + ", " + labels[j] + "))",
                      {i, j, k});
      }
    }
  }
  return Ultrametric<Scalar>(unchecked, std::move(labels), matrix.eval());
}

/// Merges happen at the distinct positive values of `u`. All blocks joining
/// into one component at a given value form a single (possibly multi-way)
/// merge; blocks and simultaneous merges are ordered by smallest member.
template <typename Scalar>
Dendrogram<Scalar> dendrogram_from_ultrametric(const Ultrametric<Scalar>& u) {
  const Index n = u.size();
  std::vector<Scalar> levels;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) levels.push_back(u(i, j));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  Dendrogram<Scalar> dendrogram{u.labels(), {}};
  detail::Components components(n);
  // block_members[root] lists the members of the block rooted at `root`.
  std::vector<std::vector<Index>> block_members(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) block_members[i] = {i};

  for (const Scalar& level : levels) {
    std::vector<Index> old_root(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) old_root[i] = components.find(i);
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (!(level < u(i, j))) components.unite(i, j);

    // For each new root, the old roots it absorbed, in increasing order.
    std::vector<std::vector<Index>> absorbed(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      if (old_root[i] != i) continue;
      absorbed[components.find(i)].push_back(i);
    }
    for (Index root = 0; root < n; ++root) {
      if (absorbed[root].size() < 2) continue;
      Merge<Scalar> merge{level, {}};
      std::vector<Index> fused;
      for (Index r : absorbed[root]) {
        merge.blocks.push_back(block_members[r]);
        fused.insert(fused.end(), block_members[r].begin(), block_members[r].end());
        block_members[r].clear();
      }
      std::sort(fused.begin(), fused.end());
      block_members[root] = std::move(fused);
      dendrogram.merges.push_back(std::move(merge));
    }
  }
  return dendrogram;
}

/// Inverse of dendrogram_from_ultrametric: u(x, x') is the resolution of the
/// merge that first puts x and x' in one block.
template <typename Scalar>
Ultrametric<Scalar> ultrametric_from_dendrogram(const Dendrogram<Scalar>& dendrogram) {
  const Index n = static_cast<Index>(dendrogram.leaves.size());
  if (n < 1) throw Error(ErrorKind::ShapeMismatch, "dendrogram has no leaves");
  detail::check_labels(dendrogram.leaves, n);

  auto malformed = [](const std::string& what) {
    return Error(ErrorKind::MalformedMergeSequence, what);
  };

  Matrix<Scalar> values = Matrix<Scalar>::Zero(n, n);
  std::vector<Index> block_of(static_cast<std::size_t>(n));
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    block_of[i] = i;
    members[i] = {i};
  }
  Index live_blocks = n;
  const Scalar* previous = nullptr;

  for (std::size_t m = 0; m < dendrogram.merges.size(); ++m) {
    const auto& merge = dendrogram.merges[m];
    const std::string at = "merge #" + std::to_string(m);
    if (!is_finite(merge.resolution) || !(Scalar(0) < merge.resolution))
      throw malformed(at + " has a non-positive or non-finite resolution");
    if (previous && merge.resolution < *previous)
      throw malformed(at + " lowers the resolution");
    if (merge.blocks.size() < 2) throw malformed(at + " lists fewer than two blocks");

    std::vector<Index> ids;
    for (const auto& block : merge.blocks) {
      if (block.empty()) throw malformed(at + " lists an empty block");
      for (Index leaf : block)
        if (leaf < 0 || leaf >= n) throw malformed(at + " references an unknown leaf");
      const Index id = block_of[block.front()];
      std::vector<Index> sorted = block;
      std::sort(sorted.begin(), sorted.end());
      if (sorted != members[id])
        throw malformed(at + " lists a block that is not a current cluster (split)");
      if (std::find(ids.begin(), ids.end(), id) != ids.end())
        throw malformed(at + " lists the same block twice");
      ids.push_back(id);
    }
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b)
        for (Index x : members[ids[a]])
          for (Index y : members[ids[b]]) values(x, y) = values(y, x) = merge.resolution;

    const Index target = ids.front();
    for (std::size_t a = 1; a < ids.size(); ++a) {
      for (Index x : members[ids[a]]) block_of[x] = target;
      members[target].insert(members[target].end(), members[ids[a]].begin(),
                             members[ids[a]].end());
      members[ids[a]].clear();
    }
    std::sort(members[target].begin(), members[target].end());
    live_blocks -= static_cast<Index>(ids.size()) - 1;
    previous = &merge.resolution;
  }
  if (live_blocks != 1) throw malformed("merges do not end in a single block");
  return Ultrametric<Scalar>(unchecked, dendrogram.leaves, std::move(values));
}

/// Equivalence classes of u(x, x') <= delta, ordered by smallest member.
template <typename Scalar>
Partition<Scalar> cut_at_resolution(const Ultrametric<Scalar>& u, const Scalar& delta) {
  if (!(Scalar(0) <= delta))
    throw Error(ErrorKind::NegativeResolution, "resolution must be non-negative");
  const Index n = u.size();
  detail::Components components(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (!(delta < u(i, j))) components.unite(i, j);

  Partition<Scalar> partition{u.labels(), {}, delta};
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    const Index root = components.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Index>(partition.blocks.size());
      partition.blocks.emplace_back();
    }
    partition.blocks[slot[root]].push_back(i);
  }
  return partition;
}

/// Restriction of the network to `block` (indices), in the network's order.
template <typename Scalar>
Network<Scalar> extract_subnetwork(const Network<Scalar>& network, std::vector<Index> block) {
  if (block.empty()) throw Error(ErrorKind::EmptyBlock, "cannot extract an empty block");
  for (Index i : block)
    if (i < 0 || i >= network.size())
      throw Error(ErrorKind::UnknownLabel, "node index " + std::to_string(i) + " out of range");
  std::sort(block.begin(), block.end());
  block.erase(std::unique(block.begin(), block.end()), block.end());
  std::vector<std::string> labels;
  labels.reserve(block.size());
  for (Index i : block) labels.push_back(network.labels()[i]);
  Matrix<Scalar> sub = network.dissim()(block, block);
  return Network<Scalar>(unchecked, std::move(labels), std::move(sub));
}

template <typename Scalar>
Network<Scalar> extract_subnetwork(const Network<Scalar>& network,
                                   const std::vector<std::string>& block) {
  std::vector<Index> indices;
  indices.reserve(block.size());
  for (const auto& label : block) indices.push_back(network.index_of(label));
  return extract_subnetwork(network, std::move(indices));
}

/// Values of `u` restricted to the listed nodes (sorted ascending).
template <typename Scalar>
Matrix<Scalar> restrict_values(const Ultrametric<Scalar>& u, const std::vector<Index>& block) {
  return u.values()(block, block);
}

using Networkd = Network<double>;
using Ultrametricd = Ultrametric<double>;
using Dendrogramd = Dendrogram<double>;
using Partitiond = Partition<double>;

}  // namespace dirclust

#endif  // DIRCLUST_CORE_HPP
