#ifndef DIRCLUST_METRIC_HPP
#define DIRCLUST_METRIC_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "dirclust/common.hpp"
#include "dirclust/core.hpp"

namespace dirclust {

/// Default cap on |X|·|Y| for exact network distances (relation bits).
inline constexpr Index kDefaultRelationBits = 25;

/// A relation between node sets X and Y (by index) that is left- and
/// right-total once validated.
struct Correspondence {
  std::vector<std::pair<Index, Index>> pairs;
};

inline void validate_correspondence(const Correspondence& r, Index m, Index n) {
  std::vector<char> left(static_cast<std::size_t>(m), 0), right(static_cast<std::size_t>(n), 0);
  for (auto [x, y] : r.pairs) {
    if (x < 0 || x >= m || y < 0 || y >= n)
      throw Error(ErrorKind::NotTotal, "pair references a node outside the networks");
    left[x] = right[y] = 1;
  }
  for (Index x = 0; x < m; ++x)
    if (!left[x]) throw Error(ErrorKind::NotTotal, "node " + std::to_string(x) + " of X is unmatched", {x});
  for (Index y = 0; y < n; ++y)
    if (!right[y]) throw Error(ErrorKind::NotTotal, "node " + std::to_string(y) + " of Y is unmatched", {y});
}

inline Correspondence identity_correspondence(Index n) {
  Correspondence r;
  for (Index i = 0; i < n; ++i) r.pairs.emplace_back(i, i);
  return r;
}

/// Half the largest dissimilarity mismatch over all pairs of pairs in R.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar correspondence_distortion(const Correspondence& r,
                                                   const Eigen::MatrixBase<DerivedX>& ax,
                                                   const Eigen::MatrixBase<DerivedY>& ay) {
  using Scalar = typename DerivedX::Scalar;
  using std::abs;
  validate_correspondence(r, ax.rows(), ay.rows());
  Scalar worst(0);
  for (auto [x, y] : r.pairs) {
    for (auto [x2, y2] : r.pairs) {
      const Scalar gap = abs(Scalar(ax(x, x2) - ay(y, y2)));
      if (worst < gap) worst = gap;
    }
  }
  return worst / Scalar(2);
}

template <typename Scalar>
Scalar correspondence_distortion(const Correspondence& r, const Network<Scalar>& nx,
                                 const Network<Scalar>& ny) {
  return correspondence_distortion(r, nx.dissim(), ny.dissim());
}

/// Number of left- and right-total relations between sets of sizes m and n,
/// by inclusion-exclusion over uncovered rows and columns.
inline std::int64_t count_correspondences(Index m, Index n) {
  if (m < 1 || n < 1) throw Error(ErrorKind::InvalidSize, "set sizes must be positive");
  if (m * n > 30) throw Error(ErrorKind::Overflow, "m*n must not exceed 30");
  auto choose = [](Index a, Index b) {
    std::int64_t c = 1;
    for (Index i = 1; i <= b; ++i) c = c * (a - b + i) / i;
    return c;
  };
  std::int64_t total = 0;
  for (Index i = 0; i <= m; ++i) {
    for (Index j = 0; j <= n; ++j) {
      const std::int64_t term = choose(m, i) * choose(n, j) * (std::int64_t{1} << ((m - i) * (n - j)));
      total += ((i + j) % 2 == 0) ? term : -term;
    }
  }
  return total;
}

/// Calls `visit(const Correspondence&)` for every correspondence between sets
/// of sizes m and n, walking all subsets of X×Y in bitmask order.
template <typename Visit>
void enumerate_correspondences(Index m, Index n, Visit&& visit,
                               Index max_bits = kDefaultRelationBits) {
  if (m < 1 || n < 1) throw Error(ErrorKind::InvalidSize, "set sizes must be positive");
  if (m * n > max_bits)
    throw Error(ErrorKind::TooLargeForExact,
                std::to_string(m) + "x" + std::to_string(n) + " exceeds the cap of " +
                    std::to_string(max_bits) + " relation bits");
  const std::uint64_t limit = std::uint64_t{1} << (m * n);
  Correspondence r;
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    std::uint64_t rows = 0, cols = 0;
    r.pairs.clear();
    for (Index b = 0; b < m * n; ++b) {
      if (!(mask >> b & 1)) continue;
      rows |= std::uint64_t{1} << (b / n);
      cols |= std::uint64_t{1} << (b % n);
      r.pairs.emplace_back(b / n, b % n);
    }
    if (rows == (std::uint64_t{1} << m) - 1 && cols == (std::uint64_t{1} << n) - 1) visit(r);
  }
}

namespace detail {

// Exact minimum distortion by depth-first search over the relation bits.
// Adding a pair never lowers the distortion, so a branch stops as soon as its
// running value reaches the incumbent, and a branch whose relation is already
// total is evaluated without adding more pairs.
template <typename Scalar, typename DerivedX, typename DerivedY>
class DistanceSearch {
 public:
  DistanceSearch(const Eigen::MatrixBase<DerivedX>& ax, const Eigen::MatrixBase<DerivedY>& ay)
      : ax_(ax), ay_(ay), m_(ax.rows()), n_(ay.rows()),
        row_(static_cast<std::size_t>(m_), 0), col_(static_cast<std::size_t>(n_), 0) {}

  Scalar run() {
    search(0, Scalar(0));
    return best_;
  }

 private:
  bool total() const {
    return covered_rows_ == m_ && covered_cols_ == n_;
  }

  void search(Index bit, const Scalar& current) {
    if (found_ && !(current < best_)) return;
    if (total()) {
      best_ = current;
      found_ = true;
      return;
    }
    if (bit == m_ * n_) return;
    const Index x = bit / n_, y = bit % n_;
    // Row x can still be covered only by bits in this row.
    if (y == 0 && x > 0 && !row_[x - 1]) return;

    Scalar extended = current;
    for (auto [x2, y2] : chosen_) {
      using std::abs;
      const Scalar out = abs(Scalar(ax_(x, x2) - ay_(y, y2)));
      const Scalar in = abs(Scalar(ax_(x2, x) - ay_(y2, y)));
      if (extended < out) extended = out;
      if (extended < in) extended = in;
    }
    chosen_.emplace_back(x, y);
    if (row_[x]++ == 0) ++covered_rows_;
    if (col_[y]++ == 0) ++covered_cols_;
    search(bit + 1, extended);
    if (--row_[x] == 0) --covered_rows_;
    if (--col_[y] == 0) --covered_cols_;
    chosen_.pop_back();

    search(bit + 1, current);
  }

  const Eigen::MatrixBase<DerivedX>& ax_;
  const Eigen::MatrixBase<DerivedY>& ay_;
  Index m_, n_;
  std::vector<int> row_, col_;
  Index covered_rows_ = 0, covered_cols_ = 0;
  std::vector<std::pair<Index, Index>> chosen_;
  Scalar best_ = Scalar(0);
  bool found_ = false;
};

}  // namespace detail

/// Generalized Gromov-Hausdorff distance between two dissimilarity matrices:
/// half the minimum, over all correspondences, of the largest mismatch.
/// Exact; refuses inputs with more than `max_bits` relation bits.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar network_distance_exact(const Eigen::MatrixBase<DerivedX>& ax,
                                                const Eigen::MatrixBase<DerivedY>& ay,
                                                Index max_bits = kDefaultRelationBits) {
  using Scalar = typename DerivedX::Scalar;
  if (!is_square(ax) || !is_square(ay) || ax.rows() < 1 || ay.rows() < 1)
    throw Error(ErrorKind::ShapeMismatch, "distance needs two non-empty square matrices");
  if (ax.rows() * ay.rows() > max_bits)
    throw Error(ErrorKind::TooLargeForExact,
                std::to_string(ax.rows()) + "x" + std::to_string(ay.rows()) +
                    " exceeds the exact-distance cap of " + std::to_string(max_bits) +
                    " relation bits");
  detail::DistanceSearch<Scalar, DerivedX, DerivedY> search(ax, ay);
  return search.run() / Scalar(2);
}

template <typename Scalar>
Scalar network_distance_exact(const Network<Scalar>& nx, const Network<Scalar>& ny,
                              Index max_bits = kDefaultRelationBits) {
  return network_distance_exact(nx.dissim(), ny.dissim(), max_bits);
}

template <typename Scalar>
Scalar network_distance_exact(const Ultrametric<Scalar>& ux, const Ultrametric<Scalar>& uy,
                              Index max_bits = kDefaultRelationBits) {
  return network_distance_exact(ux.values(), uy.values(), max_bits);
}

}  // namespace dirclust

#endif  // DIRCLUST_METRIC_HPP
