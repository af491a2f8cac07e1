#include "doctest.h"

#include <random>

#include <boost/multiprecision/gmp.hpp>

#include "dirclust/method_spec.hpp"
#include "dirclust/properties.hpp"
#include "dirclust/representable.hpp"
#include "oracles.hpp"

using namespace dirclust;
using Rational = boost::multiprecision::mpq_rational;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

RepresenterFamilyd single(const Representerd& r) { return make_family(std::vector<Representerd>{r}); }

Network<Rational> to_rational(const Networkd& n) {
  Matrix<Rational> a(n.size(), n.size());
  for (Index i = 0; i < n.size(); ++i)
    for (Index j = 0; j < n.size(); ++j) a(i, j) = Rational(n(i, j));
  return validate_network(n.labels(), a);
}

}  // namespace

TEST_CASE("representer validation") {
  const Representerd omega_r = reciprocal_representer<double>();
  CHECK(omega_r.sep() == 1);
  const Representerd omega3 = cycle3_representer(3.0);
  CHECK(omega3.sep() == 1);
  CHECK(omega3.max_arc() == 3);

  const Representerd partial =
      validate_representer<double>({"z", "w"}, std::vector<Arc<double>>{{0, 1, 1.0}});
  CHECK(partial.arcs().size() == 1);

  using Arcs = std::vector<Arc<double>>;
  CHECK(kind_of([] { validate_representer<double>({"z"}, Arcs{}); }) == ErrorKind::TooFewNodes);
  CHECK(kind_of([] { validate_representer<double>({"z", "w"}, Arcs{}); }) == ErrorKind::NoArcs);
  CHECK(kind_of([] { validate_representer<double>({"z", "w"}, Arcs{{0, 0, 1.0}}); }) ==
        ErrorKind::SelfArc);
  CHECK(kind_of([] { validate_representer<double>({"z", "w"}, Arcs{{0, 1, 0.0}}); }) ==
        ErrorKind::NonPositiveArc);
  CHECK(kind_of([] { validate_representer<double>({"z", "w"}, Arcs{{0, 1, 1.0}, {0, 1, 2.0}}); }) ==
        ErrorKind::DuplicateArc);
  CHECK(kind_of([] { validate_representer<double>({"z", "w", "v"}, Arcs{{0, 1, 1.0}}); }) ==
        ErrorKind::NotWeaklyConnected);
  CHECK(kind_of([] { validate_representer<double>({"z", "z"}, Arcs{{0, 1, 1.0}}); }) ==
        ErrorKind::DuplicateLabel);
  CHECK(kind_of([] {
          validate_representer<double>({"z", "w"},
                                       std::vector<LabeledArc<double>>{{"z", "q", 1.0}});
        }) == ErrorKind::UnknownLabel);
  CHECK(kind_of([] { make_family(std::vector<Representerd>{}); }) == ErrorKind::EmptyFamily);
}

TEST_CASE("expansion constant") {
  const Networkd c = oracle::c3(1, 5);
  CHECK(expansion_constant(NodeMap{{0, 1, 2}}, cycle3_representer(3.0), c) == 5.0 / 3.0);
  CHECK(expansion_constant(NodeMap{{1, 1, 1}}, cycle3_representer(3.0), c) == 0);
  CHECK(expansion_constant(NodeMap{{0, 1}}, reciprocal_representer<double>(),
                           oracle::two_node(2, 3)) == 3);
  CHECK(kind_of([&] { expansion_constant(NodeMap{{0, 1}}, cycle3_representer(3.0), c); }) ==
        ErrorKind::InvalidNodeMap);
  CHECK(kind_of([&] { expansion_constant(NodeMap{{0, 1, 7}}, cycle3_representer(3.0), c); }) ==
        ErrorKind::InvalidNodeMap);
}

TEST_CASE("optimal multiples") {
  const Networkd c = oracle::c3(1, 5);
  const Representerd omega3 = cycle3_representer(3.0);
  CHECK(optimal_multiple(omega3, c, 0, 1) == 5.0 / 3.0);
  CHECK(optimal_multiple(omega3, c, 1, 1) == 0);
  CHECK(optimal_multiple(reciprocal_representer<double>(), c, 0, 1) == 5);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Networkd n = random_network<double>(rng, 2 + trial % 3);
    const Matrix<double> lambda = lambda_family(single(omega3), n);
    for (Index i = 0; i < n.size(); ++i)
      for (Index j = 0; j < n.size(); ++j) CHECK(optimal_multiple(omega3, n, i, j) == lambda(i, j));
  }
}

TEST_CASE("representable clustering of C3(1,5) with the 3-cycle") {
  const Ultrametricd u = representable_cluster(single(cycle3_representer(3.0)), oracle::c3(1, 5));
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(u(i, j) == (i == j ? 0.0 : 5.0 / 3.0));
}

TEST_CASE("lambda matches a brute-force map enumeration") {
  std::mt19937_64 rng(23);
  const std::vector<Representerd> members{reciprocal_representer<double>(),
                                          cycle3_representer(3.0),
                                          validate_representer<double>(
                                              {"z", "w", "v"},
                                              std::vector<Arc<double>>{{0, 1, 1.0}, {2, 1, 0.5}})};
  for (int trial = 0; trial < 40; ++trial) {
    const Networkd n = random_network<double>(rng, 2 + trial % 3);
    for (const auto& m : members)
      CHECK(lambda_family(single(m), n) == oracle::brute_lambda<double>({m}, n.dissim()));
    CHECK(lambda_family(make_family(members), n) == oracle::brute_lambda(members, n.dissim()));
  }
}

TEST_CASE("cycle family") {
  CHECK(cycle_family<double>(2).members().size() == 1);
  CHECK(cycle_family<double>(3).members().size() == 2);
  const Representerd two = cycle_family<double>(2).members()[0];
  CHECK(two.size() == 2);
  CHECK(two.arcs().size() == 2);
  CHECK(kind_of([] { cycle_family<double>(1); }) == ErrorKind::InvalidLength);
  CHECK(nonreciprocal_cycle_length(1) == 2);
  CHECK(nonreciprocal_cycle_length(4) == 6);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Networkd n = random_network<double>(rng, 2 + trial % 3);
    CHECK(representable_cluster(single(reciprocal_representer<double>()), n) == reciprocal(n));
    CHECK(representable_cluster(cycle_family<double>(nonreciprocal_cycle_length(n.size())), n) ==
          nonreciprocal(n));
  }
}

TEST_CASE("fast path for the 3-cycle") {
  const Matrix<double> lambda = fast_lambda_cycle3(oracle::c3(1, 5), 3.0);
  CHECK(lambda(0, 1) == 5.0 / 3.0);
  CHECK(kind_of([] { fast_lambda_cycle3(oracle::c3(1, 5), 1.0); }) == ErrorKind::InvalidRatio);
  CHECK(kind_of([] { fast_lambda_cycle3(oracle::c3(1, 5), 0.5); }) == ErrorKind::InvalidRatio);

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const Networkd n = random_network<double>(rng, 1 + trial % 6);
    for (double r : {1.5, 2.0, 3.0, 7.0})
      CHECK(fast_lambda_cycle3(n, r) == lambda_family(single(cycle3_representer(r)), n));
  }
}

TEST_CASE("stability constant") {
  CHECK(stability_constant(single(reciprocal_representer<double>())) == 1);
  CHECK(stability_constant(single(cycle3_representer(3.0))) == 1);
  const Representerd half =
      validate_representer<double>({"z", "w"}, std::vector<Arc<double>>{{0, 1, 0.5}});
  CHECK(stability_constant(single(half)) == 2);
  CHECK(make_family(std::vector<Representerd>{half, cycle3_representer(3.0)}).d_max() == 3);
}

TEST_CASE("complexity guard") {
  const Networkd n = oracle::c3(1, 5);
  CHECK(kind_of([&] { lambda_family(cycle_family<double>(6), n, 100); }) ==
        ErrorKind::ComplexityGuard);
  CHECK_NOTHROW(lambda_family(cycle_family<double>(4), n, 81));
  CHECK(kind_of([&] { lambda_family(cycle_family<double>(4), n, 80); }) ==
        ErrorKind::ComplexityGuard);
}

TEST_CASE("rational scalars give exact thirds") {
  using RepresenterQ = Representer<Rational>;
  const RepresenterFamily<Rational> family =
      make_family(std::vector<RepresenterQ>{cycle3_representer(Rational(3))});
  const Network<Rational> c = to_rational(oracle::c3(1, 5));
  const Ultrametric<Rational> u = representable_cluster(family, c);
  CHECK(u(0, 1) == Rational(5, 3));
  CHECK(fast_lambda_cycle3(c, Rational(3))(0, 1) == Rational(5, 3));

  std::mt19937_64 rng(41);
  const ClusteringMethod<Rational> method = [&](const Network<Rational>& n) {
    return representable_cluster(family, n);
  };
  for (int trial = 0; trial < 20; ++trial) {
    const Network<Rational> n = to_rational(random_network<double>(rng, 2 + trial % 4));
    for (const Rational alpha : {Rational(1, 2), Rational(2), Rational(10)})
      CHECK(check_scale_preservation(method, n, alpha).passed);
  }
}
