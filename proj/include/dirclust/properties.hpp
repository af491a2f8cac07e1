#ifndef DIRCLUST_PROPERTIES_HPP
#define DIRCLUST_PROPERTIES_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dirclust/common.hpp"
#include "dirclust/core.hpp"
#include "dirclust/method_spec.hpp"
#include "dirclust/methods.hpp"
#include "dirclust/metric.hpp"

namespace dirclust {

// ---------------------------------------------------------------------------
// Reports

/// Everything needed to replay a failure: the generating seed when there is
/// one, the offending instance, and the values that disagreed.
template <typename Scalar>
struct Witness {
  std::optional<std::uint64_t> seed;
  std::string detail;
  std::vector<Network<Scalar>> instance;
  std::vector<std::pair<std::string, Scalar>> values;
};

template <typename Scalar>
struct CheckReport {
  std::string property;
  bool passed = true;
  std::size_t trials = 0;
  std::optional<Witness<Scalar>> witness;

  /// Folds another report into this one; the first failure wins.
  void absorb(const CheckReport& other) {
    trials += other.trials;
    if (passed && !other.passed) {
      passed = false;
      witness = other.witness;
    }
  }
};

// ---------------------------------------------------------------------------
// Generators. Off-diagonal entries are i.i.d. uniform on [0.1, 10].

inline constexpr double kRandomLow = 0.1;
inline constexpr double kRandomHigh = 10.0;

inline std::vector<std::string> default_labels(Index n) {
  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  return labels;
}

template <typename Scalar>
Network<Scalar> random_network(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> weight(kRandomLow, kRandomHigh);
  Matrix<Scalar> a = Matrix<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) a(i, j) = Scalar(weight(rng));
  return Network<Scalar>(unchecked, default_labels(n), std::move(a));
}

template <typename Scalar>
Network<Scalar> random_symmetric_network(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> weight(kRandomLow, kRandomHigh);
  Matrix<Scalar> a = Matrix<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) a(i, j) = a(j, i) = Scalar(weight(rng));
  return Network<Scalar>(unchecked, default_labels(n), std::move(a));
}

/// Random merge sequence: repeatedly fuses two or three current blocks at a
/// non-decreasing resolution (ties are deliberately frequent).
template <typename Scalar>
Dendrogram<Scalar> random_dendrogram(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> step(0.05, 2.0);
  std::bernoulli_distribution tie(0.25), triple(0.3);
  Dendrogram<Scalar> dendrogram{default_labels(n), {}};
  std::vector<std::vector<Index>> blocks;
  for (Index i = 0; i < n; ++i) blocks.push_back({i});
  double level = 0.0;
  while (blocks.size() > 1) {
    if (level == 0.0 || !tie(rng)) level += step(rng);
    std::shuffle(blocks.begin(), blocks.end(), rng);
    const std::size_t take = (blocks.size() >= 3 && triple(rng)) ? 3 : 2;
    Merge<Scalar> merge{Scalar(level), {}};
    std::vector<Index> fused;
    for (std::size_t b = 0; b < take; ++b) {
      merge.blocks.push_back(blocks.back());
      fused.insert(fused.end(), blocks.back().begin(), blocks.back().end());
      blocks.pop_back();
    }
    std::sort(fused.begin(), fused.end());
    blocks.push_back(std::move(fused));
    dendrogram.merges.push_back(std::move(merge));
  }
  return dendrogram;
}

template <typename Scalar>
Ultrametric<Scalar> random_ultrametric(std::mt19937_64& rng, Index n) {
  return ultrametric_from_dendrogram(random_dendrogram<Scalar>(rng, n));
}

/// N_X, N_Y and a surjection phi: X -> Y with A_X(x,x') >= A_Y(phi x, phi x').
template <typename Scalar>
struct ReducingInstance {
  Network<Scalar> nx;
  Network<Scalar> ny;
  std::vector<Index> phi;
};

template <typename Scalar>
ReducingInstance<Scalar> generate_reducing_pair(std::uint64_t seed, Index n_y, Index n_x,
                                                double noise = 1.0) {
  if (n_y < 1 || n_x < n_y)
    throw Error(ErrorKind::InvalidSize, "need n_X >= n_Y >= 1");
  std::mt19937_64 rng(seed);
  Network<Scalar> ny = random_network<Scalar>(rng, n_y);

  std::vector<Index> phi(static_cast<std::size_t>(n_x));
  std::uniform_int_distribution<Index> any(0, n_y - 1);
  for (Index x = 0; x < n_x; ++x) phi[x] = x < n_y ? x : any(rng);
  std::shuffle(phi.begin(), phi.end(), rng);

  std::uniform_real_distribution<double> extra(0.0, noise);
  std::uniform_real_distribution<double> fresh(kRandomLow, kRandomHigh);
  Matrix<Scalar> a = Matrix<Scalar>::Zero(n_x, n_x);
  for (Index i = 0; i < n_x; ++i) {
    for (Index j = 0; j < n_x; ++j) {
      if (i == j) continue;
      if (phi[i] == phi[j]) a(i, j) = Scalar(fresh(rng));
      else a(i, j) = ny(phi[i], phi[j]) + Scalar(noise > 0.0 ? extra(rng) : 0.0);
    }
  }
  Network<Scalar> nx(unchecked, default_labels(n_x), std::move(a));
  return {std::move(nx), std::move(ny), std::move(phi)};
}

// ---------------------------------------------------------------------------
// Checkers

template <typename Scalar>
Network<Scalar> two_node_network(const Scalar& forward, const Scalar& backward) {
  Matrix<Scalar> a(2, 2);
  a << Scalar(0), forward, backward, Scalar(0);
  return validate_network({"p", "q"}, a);
}

template <typename Scalar>
CheckReport<Scalar> check_value_axiom(const ClusteringMethod<Scalar>& method,
                                      const Scalar& alpha, const Scalar& beta) {
  const Network<Scalar> network = two_node_network(alpha, beta);
  const Ultrametric<Scalar> u = method(network);
  const Scalar expected = alpha < beta ? beta : alpha;
  CheckReport<Scalar> report{"value", true, 1, std::nullopt};
  if (!(u(0, 1) == expected && u(1, 0) == expected)) {
    report.passed = false;
    report.witness = Witness<Scalar>{std::nullopt, "two-node output differs from max(alpha, beta)",
                                     {network},
                                     {{"expected", expected}, {"u(p,q)", u(0, 1)}, {"u(q,p)", u(1, 0)}}};
  }
  return report;
}

template <typename Scalar>
CheckReport<Scalar> check_transformation_axiom(const ClusteringMethod<Scalar>& method,
                                               const Network<Scalar>& nx,
                                               const Network<Scalar>& ny,
                                               const std::vector<Index>& phi) {
  if (static_cast<Index>(phi.size()) != nx.size())
    throw Error(ErrorKind::NotReducing, "map must be defined on every node of X");
  for (Index y : phi)
    if (y < 0 || y >= ny.size()) throw Error(ErrorKind::NotReducing, "map leaves Y");
  for (Index i = 0; i < nx.size(); ++i)
    for (Index j = 0; j < nx.size(); ++j)
      if (nx(i, j) < ny(phi[i], phi[j]))
        throw Error(ErrorKind::NotReducing,
                    "A_X(" + nx.labels()[i] + ", " + nx.labels()[j] + ") < A_Y of the images",
                    {i, j});

  const Ultrametric<Scalar> ux = method(nx);
  const Ultrametric<Scalar> uy = method(ny);
  CheckReport<Scalar> report{"transformation", true, 1, std::nullopt};
  for (Index i = 0; i < nx.size() && report.passed; ++i) {
    for (Index j = 0; j < nx.size(); ++j) {
      if (ux(i, j) < uy(phi[i], phi[j])) {
        report.passed = false;
        report.witness = Witness<Scalar>{
            std::nullopt,
            "u_X(" + nx.labels()[i] + ", " + nx.labels()[j] + ") < u_Y of the images",
            {nx, ny},
            {{"u_X", ux(i, j)}, {"u_Y", uy(phi[i], phi[j])}}};
        break;
      }
    }
  }
  return report;
}

/// Reclusters every block of the output at resolution delta and compares it
/// with the restriction of the full output, exactly.
template <typename Scalar>
CheckReport<Scalar> check_excisiveness(const ClusteringMethod<Scalar>& method,
                                       const Network<Scalar>& network, const Scalar& delta) {
  if (!(Scalar(0) < delta))
    throw Error(ErrorKind::NegativeResolution, "excisiveness needs a positive resolution");
  const Ultrametric<Scalar> u = method(network);
  const Partition<Scalar> partition = cut_at_resolution(u, delta);
  CheckReport<Scalar> report{"excisive", true, 1, std::nullopt};
  for (const auto& block : partition.blocks) {
    if (block.size() < 2) continue;
    const Network<Scalar> sub = extract_subnetwork(network, block);
    const Matrix<Scalar> restricted = restrict_values(u, block);
    const Ultrametric<Scalar> reclustered = method(sub);
    for (Index i = 0; i < sub.size(); ++i) {
      for (Index j = 0; j < sub.size(); ++j) {
        if (reclustered(i, j) == restricted(i, j)) continue;
        report.passed = false;
        report.witness = Witness<Scalar>{
            std::nullopt,
            "block reclustered at resolution differs on (" + sub.labels()[i] + ", " +
                sub.labels()[j] + ")",
            {network, sub},
            {{"delta", delta}, {"restricted", restricted(i, j)}, {"reclustered", reclustered(i, j)}}};
        return report;
      }
    }
  }
  return report;
}

/// Resolutions at which excisiveness is checked: each distinct merge value
/// and the midpoint between consecutive values.
template <typename Scalar>
std::vector<Scalar> excisiveness_resolutions(const Ultrametric<Scalar>& u) {
  std::vector<Scalar> levels;
  for (Index i = 0; i < u.size(); ++i)
    for (Index j = i + 1; j < u.size(); ++j) levels.push_back(u(i, j));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i > 0) out.push_back((levels[i - 1] + levels[i]) / Scalar(2));
    out.push_back(levels[i]);
  }
  return out;
}

template <typename Scalar>
CheckReport<Scalar> check_excisiveness_sweep(const ClusteringMethod<Scalar>& method,
                                             const Network<Scalar>& network) {
  CheckReport<Scalar> report{"excisive", true, 0, std::nullopt};
  for (const Scalar& delta : excisiveness_resolutions(method(network))) {
    report.absorb(check_excisiveness(method, network, delta));
    if (!report.passed) break;
  }
  return report;
}

template <typename Scalar>
CheckReport<Scalar> check_scale_preservation(const ClusteringMethod<Scalar>& method,
                                             const Network<Scalar>& network,
                                             const Scalar& alpha) {
  const Ultrametric<Scalar> base = method(network);
  const Ultrametric<Scalar> scaled = method(scale_network(network, alpha));
  CheckReport<Scalar> report{"scale", true, 1, std::nullopt};
  for (Index i = 0; i < network.size(); ++i) {
    for (Index j = 0; j < network.size(); ++j) {
      const Scalar expected = alpha * base(i, j);
      if (scaled(i, j) == expected) continue;
      report.passed = false;
      report.witness = Witness<Scalar>{
          std::nullopt,
          "output on the scaled network is not the scaled output at (" + network.labels()[i] +
              ", " + network.labels()[j] + ")",
          {network},
          {{"alpha", alpha},
           {"original", base(i, j)},
           {"scaled", scaled(i, j)},
           {"factor", scaled(i, j) / base(i, j)}}};
      return report;
    }
  }
  return report;
}

inline constexpr double kStabilitySlack = 1e-12;

template <typename Scalar>
CheckReport<Scalar> check_stability(const ClusteringMethod<Scalar>& method,
                                    const Network<Scalar>& nx, const Network<Scalar>& ny,
                                    const Scalar& lipschitz,
                                    const Scalar& slack = Scalar(kStabilitySlack),
                                    Index max_bits = kDefaultRelationBits) {
  const Scalar input_distance = network_distance_exact(nx, ny, max_bits);
  const Scalar output_distance = network_distance_exact(method(nx), method(ny), max_bits);
  CheckReport<Scalar> report{"stability", true, 1, std::nullopt};
  if (lipschitz * input_distance + slack < output_distance) {
    report.passed = false;
    report.witness = Witness<Scalar>{std::nullopt, "output distance exceeds L times input distance",
                                     {nx, ny},
                                     {{"L", lipschitz},
                                      {"input_distance", input_distance},
                                      {"output_distance", output_distance}}};
  }
  return report;
}

/// Entrywise u^NR <= u <= u^R, exactly.
template <typename Scalar>
CheckReport<Scalar> check_sandwich(const ClusteringMethod<Scalar>& method,
                                   const Network<Scalar>& network) {
  const Ultrametric<Scalar> u = method(network);
  const Ultrametric<Scalar> lower = nonreciprocal(network);
  const Ultrametric<Scalar> upper = reciprocal(network);
  CheckReport<Scalar> report{"sandwich", true, 1, std::nullopt};
  for (Index i = 0; i < network.size(); ++i) {
    for (Index j = 0; j < network.size(); ++j) {
      if (!(u(i, j) < lower(i, j)) && !(upper(i, j) < u(i, j))) continue;
      report.passed = false;
      report.witness = Witness<Scalar>{
          std::nullopt,
          "output leaves [nonreciprocal, reciprocal] at (" + network.labels()[i] + ", " +
              network.labels()[j] + ")",
          {network},
          {{"nonreciprocal", lower(i, j)}, {"output", u(i, j)}, {"reciprocal", upper(i, j)}}};
      return report;
    }
  }
  return report;
}

/// Output passes validate_ultrametric.
template <typename Scalar>
CheckReport<Scalar> check_validity(const ClusteringMethod<Scalar>& method,
                                   const Network<Scalar>& network) {
  const Ultrametric<Scalar> u = method(network);
  CheckReport<Scalar> report{"ultrametric", true, 1, std::nullopt};
  try {
    validate_ultrametric(u.labels(), u.values());
  } catch (const Error& e) {
    report.passed = false;
    report.witness = Witness<Scalar>{std::nullopt, e.what(), {network, u.as_network()}, {}};
  }
  return report;
}

}  // namespace dirclust

#endif  // DIRCLUST_PROPERTIES_HPP
