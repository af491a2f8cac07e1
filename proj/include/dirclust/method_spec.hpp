#ifndef DIRCLUST_METHOD_SPEC_HPP
#define DIRCLUST_METHOD_SPEC_HPP

#include <functional>
#include <memory>
#include <string>

#include "dirclust/methods.hpp"
#include "dirclust/representable.hpp"

namespace dirclust {

enum class MethodKind {
  Reciprocal,
  Nonreciprocal,
  SemiReciprocal,
  Grafting,
  SingleLinkage,
  Representable,
};

template <typename Scalar>
struct MethodSpec {
  MethodKind kind = MethodKind::Reciprocal;
  long max_nodes = 2;              // SemiReciprocal
  Scalar beta = Scalar(1);         // Grafting
  std::shared_ptr<const RepresenterFamily<Scalar>> family;  // Representable
  unsigned long long budget = kDefaultBudget;               // Representable

  static MethodSpec of(MethodKind k) {
    MethodSpec spec;
    spec.kind = k;
    return spec;
  }
  static MethodSpec reciprocal() { return of(MethodKind::Reciprocal); }
  static MethodSpec nonreciprocal() { return of(MethodKind::Nonreciprocal); }
  static MethodSpec single_linkage() { return of(MethodKind::SingleLinkage); }
  static MethodSpec semi_reciprocal(long t) {
    MethodSpec spec = of(MethodKind::SemiReciprocal);
    spec.max_nodes = t;
    return spec;
  }
  static MethodSpec grafting(Scalar b) {
    MethodSpec spec = of(MethodKind::Grafting);
    spec.beta = b;
    return spec;
  }
  static MethodSpec representable(std::shared_ptr<const RepresenterFamily<Scalar>> f,
                                  unsigned long long budget = kDefaultBudget) {
    MethodSpec spec = of(MethodKind::Representable);
    spec.family = std::move(f);
    spec.budget = budget;
    return spec;
  }
};

/// Short human-readable name, e.g. "semireciprocal(t=3)".
template <typename Scalar>
std::string describe(const MethodSpec<Scalar>& spec) {
  switch (spec.kind) {
    case MethodKind::Reciprocal: return "reciprocal";
    case MethodKind::Nonreciprocal: return "nonreciprocal";
    case MethodKind::SingleLinkage: return "single-linkage";
    case MethodKind::SemiReciprocal: return "semireciprocal(t=" + std::to_string(spec.max_nodes) + ")";
    case MethodKind::Grafting: return "grafting";
    case MethodKind::Representable: return "representable";
  }
  return "unknown";
}

template <typename Scalar>
using ClusteringMethod = std::function<Ultrametric<Scalar>(const Network<Scalar>&)>;

template <typename Scalar>
Ultrametric<Scalar> cluster(const MethodSpec<Scalar>& spec, const Network<Scalar>& network) {
  switch (spec.kind) {
    case MethodKind::Reciprocal: return reciprocal(network);
    case MethodKind::Nonreciprocal: return nonreciprocal(network);
    case MethodKind::SingleLinkage: return single_linkage(network);
    case MethodKind::SemiReciprocal: return semi_reciprocal(network, spec.max_nodes);
    case MethodKind::Grafting: return grafting(network, spec.beta);
    case MethodKind::Representable:
      if (!spec.family) throw Error(ErrorKind::EmptyFamily, "representable method has no family");
      return representable_cluster(*spec.family, network, spec.budget);
  }
  throw Error(ErrorKind::ShapeMismatch, "unknown method kind");
}

template <typename Scalar>
ClusteringMethod<Scalar> as_function(MethodSpec<Scalar> spec) {
  return [spec = std::move(spec)](const Network<Scalar>& n) { return cluster(spec, n); };
}

}  // namespace dirclust

#endif  // DIRCLUST_METHOD_SPEC_HPP
