#include "doctest.h"

#include <random>

#include "dirclust/minimax.hpp"
#include "dirclust/properties.hpp"
#include "oracles.hpp"

using namespace dirclust;

TEST_CASE("closure of C3(1,5) is all ones") {
  const Matrix<double> c = minmax_closure(oracle::c3(1, 5).dissim());
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(c(i, j) == (i == j ? 0.0 : 1.0));
}

TEST_CASE("closure follows the cheaper chain") {
  Matrix<double> a(3, 3);
  a << 0, 1, 5, 1, 0, 2, 5, 2, 0;
  const Matrix<double> c = minmax_closure(a);
  CHECK(c(0, 2) == 2);
  CHECK(c(2, 0) == 2);
  CHECK(c(0, 1) == 1);
}

TEST_CASE("closure fixes ultrametrics") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Ultrametricd u = random_ultrametric<double>(rng, 2 + trial % 6);
    CHECK(minmax_closure(u.values()) == u.values());
  }
}

TEST_CASE("closure matches exhaustive simple chains") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Networkd n = random_network<double>(rng, 1 + trial % 5);
    CHECK(minmax_closure(n.dissim()) == oracle::chain_closure(n.dissim(), n.size()));
  }
}

TEST_CASE("minmax_product") {
  Matrix<double> a(2, 2), b(2, 2);
  a << 0, 3, 1, 0;
  b << 0, 2, 4, 0;
  const Matrix<double> p = minmax_product(a, b);
  CHECK(p(0, 0) == 0);
  CHECK(p(0, 1) == 2);
  CHECK(p(1, 0) == 1);
  CHECK(p(1, 1) == 0);
}

TEST_CASE("bounded hop") {
  const Matrix<double> c = bounded_hop_minmax(oracle::c3(1, 5).dissim(), 3);
  CHECK(c(1, 0) == 1);
  CHECK(c(0, 1) == 1);
  const Matrix<double> direct = bounded_hop_minmax(oracle::c3(1, 5).dissim(), 2);
  CHECK(direct == oracle::c3(1, 5).dissim());
  CHECK_THROWS_AS(bounded_hop_minmax(direct, 1), Error);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Networkd n = random_network<double>(rng, 2 + trial % 5);
    for (long t = 2; t <= 6; ++t)
      CHECK(bounded_hop_minmax(n.dissim(), t) ==
            oracle::chain_closure(n.dissim(), std::min<Index>(t, n.size())));
  }
}

TEST_CASE("single linkage") {
  Matrix<double> a(3, 3);
  a << 0, 1, 5, 1, 0, 2, 5, 2, 0;
  const Ultrametricd u = single_linkage(validate_network({"a", "b", "c"}, a));
  CHECK(u(0, 1) == 1);
  CHECK(u(1, 2) == 2);
  CHECK(u(0, 2) == 2);

  Matrix<double> t(2, 2);
  t << 0, 3, 3, 0;
  CHECK(single_linkage(validate_network({"p", "q"}, t))(0, 1) == 3);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Ultrametricd v = random_ultrametric<double>(rng, 1 + trial % 7);
    CHECK(single_linkage(v.as_network()) == v);
    const Networkd s = random_symmetric_network<double>(rng, 1 + trial % 7);
    CHECK(single_linkage(s).values() == oracle::threshold_single_linkage(s.dissim()));
  }

  try {
    single_linkage(oracle::c3(1, 5));
    FAIL("expected AsymmetricInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AsymmetricInput);
  }
}
