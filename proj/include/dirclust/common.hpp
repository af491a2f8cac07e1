#ifndef DIRCLUST_COMMON_HPP
#define DIRCLUST_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dirclust {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

enum class ErrorKind {
  // network / ultrametric / dendrogram validation
  ShapeMismatch,
  NonZeroDiagonal,
  NonPositiveOffDiagonal,
  NonFinite,
  DuplicateLabel,
  UnknownLabel,
  EmptyBlock,
  NonPositiveScale,
  NotSymmetric,
  IdentityViolation,
  StrongTriangleViolation,
  MalformedMergeSequence,
  NegativeResolution,
  // methods
  InvalidHopBound,
  AsymmetricInput,
  NonPositiveBeta,
  // representers
  NotWeaklyConnected,
  NonPositiveArc,
  TooFewNodes,
  NoArcs,
  SelfArc,
  DuplicateArc,
  EmptyFamily,
  InvalidNodeMap,
  InvalidLength,
  InvalidRatio,
  ComplexityGuard,
  // metric
  NotTotal,
  TooLargeForExact,
  InvalidSize,
  Overflow,
  // properties
  NotReducing,
  // ingestion
  ParseError,
  ZeroColumn,
  ZeroUseEntry,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `indices` carries the offending node
/// indices where one exists (e.g. the (i, j, k) triple of a strong triangle
/// violation).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::vector<Index> indices = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        indices_(std::move(indices)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<Index>& indices() const noexcept { return indices_; }

 private:
  ErrorKind kind_;
  std::vector<Index> indices_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonZeroDiagonal: return "NonZeroDiagonal";
    case ErrorKind::NonPositiveOffDiagonal: return "NonPositiveOffDiagonal";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::EmptyBlock: return "EmptyBlock";
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::IdentityViolation: return "IdentityViolation";
    case ErrorKind::StrongTriangleViolation: return "StrongTriangleViolation";
    case ErrorKind::MalformedMergeSequence: return "MalformedMergeSequence";
    case ErrorKind::NegativeResolution: return "NegativeResolution";
    case ErrorKind::InvalidHopBound: return "InvalidHopBound";
    case ErrorKind::AsymmetricInput: return "AsymmetricInput";
    case ErrorKind::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorKind::NotWeaklyConnected: return "NotWeaklyConnected";
    case ErrorKind::NonPositiveArc: return "NonPositiveArc";
    case ErrorKind::TooFewNodes: return "TooFewNodes";
    case ErrorKind::NoArcs: return "NoArcs";
    case ErrorKind::SelfArc: return "SelfArc";
    case ErrorKind::DuplicateArc: return "DuplicateArc";
    case ErrorKind::EmptyFamily: return "EmptyFamily";
    case ErrorKind::InvalidNodeMap: return "InvalidNodeMap";
    case ErrorKind::InvalidLength: return "InvalidLength";
    case ErrorKind::InvalidRatio: return "InvalidRatio";
    case ErrorKind::ComplexityGuard: return "ComplexityGuard";
    case ErrorKind::NotTotal: return "NotTotal";
    case ErrorKind::TooLargeForExact: return "TooLargeForExact";
    case ErrorKind::InvalidSize: return "InvalidSize";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NotReducing: return "NotReducing";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::ZeroUseEntry: return "ZeroUseEntry";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Comparison slack for symmetry and strong-triangle checks. Exact scalar
/// types (rationals) get zero slack.
template <typename Scalar>
struct Tolerance {
  static Scalar relative() {
    if constexpr (std::is_floating_point_v<Scalar>) return Scalar(1e-9);
    else return Scalar(0);
  }
  static Scalar absolute() {
    if constexpr (std::is_floating_point_v<Scalar>) return Scalar(1e-12);
    else return Scalar(0);
  }
  /// Allowed excess of `lhs` over `rhs` when checking lhs <= rhs.
  static Scalar slack(const Scalar& lhs, const Scalar& rhs) {
    using std::abs;
    const Scalar mag = abs(lhs) < abs(rhs) ? abs(rhs) : abs(lhs);
    const Scalar rel = relative() * mag;
    return rel < absolute() ? absolute() : rel;
  }
};

template <typename Scalar>
bool is_finite(const Scalar& x) {
  if constexpr (std::is_floating_point_v<Scalar>) return std::isfinite(x);
  else return true;
}

namespace detail {

template <typename Scalar>
inline constexpr auto less = [](const Scalar& a, const Scalar& b) { return a < b; };

template <typename Scalar>
struct min_op {
  Scalar operator()(const Scalar& a, const Scalar& b) const { return b < a ? b : a; }
};

template <typename Scalar>
struct max_op {
  Scalar operator()(const Scalar& a, const Scalar& b) const { return a < b ? b : a; }
};

}  // namespace detail

/// Entrywise min of two equally sized expressions, as a lazy Eigen expression.
/// Works for scalar types whose converting constructors defeat Eigen's own
/// cwiseMin overload resolution.
template <typename DerivedA, typename DerivedB>
auto cwise_min(const Eigen::MatrixBase<DerivedA>& a,
               const Eigen::MatrixBase<DerivedB>& b) {
  return a.binaryExpr(b.derived(), detail::min_op<typename DerivedA::Scalar>{});
}

template <typename DerivedA, typename DerivedB>
auto cwise_max(const Eigen::MatrixBase<DerivedA>& a,
               const Eigen::MatrixBase<DerivedB>& b) {
  return a.binaryExpr(b.derived(), detail::max_op<typename DerivedA::Scalar>{});
}

/// max(A, Aᵀ) entrywise.
template <typename Derived>
auto max_symmetrize(const Eigen::MatrixBase<Derived>& a) {
  return cwise_max(a, a.transpose());
}

template <typename Derived>
auto min_symmetrize(const Eigen::MatrixBase<Derived>& a) {
  return cwise_min(a, a.transpose());
}

template <typename Derived>
bool is_square(const Eigen::MatrixBase<Derived>& a) {
  return a.rows() == a.cols();
}

template <typename Derived>
bool is_exactly_symmetric(const Eigen::MatrixBase<Derived>& a) {
  if (!is_square(a)) return false;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = i + 1; j < a.cols(); ++j)
      if (!(a(i, j) == a(j, i))) return false;
  return true;
}

}  // namespace dirclust

#endif  // DIRCLUST_COMMON_HPP
