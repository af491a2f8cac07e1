#include "doctest.h"

#include <random>

#include "dirclust/io.hpp"
#include "dirclust/methods.hpp"
#include "dirclust/properties.hpp"
#include "oracles.hpp"

using namespace dirclust;

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

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("network CSV") {
  const Networkd t = io::parse_network_csv("p,q\n0,2\n3,0\n", "t.csv");
  CHECK(t == oracle::two_node(2, 3));
  CHECK(io::parse_network_csv(io::network_to_csv(t), "again") == t);

  const std::string bad_inf = "p,q\n0,inf\n3,0\n";
  CHECK(kind_of([&] { io::parse_network_csv(bad_inf, "t.csv"); }) == ErrorKind::NonFinite);
  CHECK(message_of([&] { io::parse_network_csv(bad_inf, "t.csv"); }).find("t.csv:2:2") !=
        std::string::npos);
  CHECK(kind_of([] { io::parse_network_csv("p,q\n0,x\n3,0\n", "t"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::parse_network_csv("p,q\n0,1\n", "t"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::parse_network_csv("p,q\n0,1,2\n3,0\n", "t"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::parse_network_csv("p,q\n1,1\n3,0\n", "t"); }) ==
        ErrorKind::NonZeroDiagonal);
  CHECK(kind_of([] { io::parse_network_csv("", "t"); }) == ErrorKind::ParseError);
}

TEST_CASE("network JSON") {
  const std::string doc = R"({"nodes": ["p", "q"],
    "edges": [{"from": "p", "to": "q", "weight": 2}, {"from": "q", "to": "p", "weight": 3}]})";
  CHECK(io::parse_network_json(doc, "t.json") == oracle::two_node(2, 3));

  const std::string missing = R"({"nodes": ["p", "q"],
    "edges": [{"from": "p", "to": "q", "weight": 2}]})";
  CHECK(kind_of([&] { io::parse_network_json(missing, "t.json"); }) == ErrorKind::ParseError);
  const std::string unknown = R"({"nodes": ["p", "q"],
    "edges": [{"from": "p", "to": "z", "weight": 2}, {"from": "q", "to": "p", "weight": 3}]})";
  CHECK(kind_of([&] { io::parse_network_json(unknown, "t.json"); }) == ErrorKind::UnknownLabel);
  CHECK(kind_of([] { io::parse_network_json("{", "t.json"); }) == ErrorKind::ParseError);
}

TEST_CASE("representer JSON") {
  const std::string doc = R"({"representers": [{"nodes": ["z0", "z1", "z2"], "arcs": [
      {"from": "z0", "to": "z1", "weight": 1}, {"from": "z1", "to": "z2", "weight": 1},
      {"from": "z2", "to": "z0", "weight": 1}, {"from": "z1", "to": "z0", "weight": 3},
      {"from": "z2", "to": "z1", "weight": 3}, {"from": "z0", "to": "z2", "weight": 3}]}]})";
  const RepresenterFamilyd family = io::parse_representers_json(doc, "w.json");
  REQUIRE(family.members().size() == 1);
  CHECK(family.sep() == 1);
  CHECK(family.d_max() == 3);
  CHECK(lambda_family(family, oracle::c3(1, 5)) ==
        lambda_family(make_family(std::vector<Representerd>{cycle3_representer(3.0)}),
                      oracle::c3(1, 5)));
  const RepresenterFamilyd again =
      io::parse_representers_json(io::representers_to_json(family).dump(), "again");
  CHECK(again.members()[0].arcs().size() == 6);

  CHECK(kind_of([] { io::parse_representers_json(R"({"representers": []})", "x"); }) ==
        ErrorKind::EmptyFamily);
  CHECK(kind_of([] {
          io::parse_representers_json(
              R"({"representers": [{"nodes": ["a", "b"], "arcs": [{"from": "a", "to": "b", "weight": -1}]}]})",
              "x");
        }) == ErrorKind::NonPositiveArc);
}

TEST_CASE("Newick writer") {
  const Ultrametricd u = reciprocal(oracle::two_node(2, 3));
  CHECK(io::to_newick(dendrogram_from_ultrametric(u)) == "(p:3,q:3)3;");

  Matrix<double> m(3, 3);
  m << 0, 1, 2, 1, 0, 2, 2, 2, 0;
  const Dendrogramd d = dendrogram_from_ultrametric(validate_ultrametric({"a", "b", "c"}, m));
  CHECK(io::to_newick(d) == "((a:1,b:1)1:1,c:2)2;");

  Matrix<double> one(1, 1);
  one << 0;
  CHECK(io::to_newick(dendrogram_from_ultrametric(validate_ultrametric({"solo"}, one))) ==
        "solo;");
  Matrix<double> odd(2, 2);
  odd << 0, 1, 1, 0;
  CHECK(io::to_newick(dendrogram_from_ultrametric(validate_ultrametric({"a b", "c"}, odd))) ==
        "('a b':1,c:1)1;");
}

TEST_CASE("Newick reader") {
  const Dendrogramd d = io::parse_newick("((a:1,b:1)1:1,c:2)2;");
  CHECK(d.leaves == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(d.merges.size() == 2);
  CHECK(d.merges[1].resolution == 2);

  const Dendrogramd heights_only = io::parse_newick("((a:1,b:1):1,c:2);");
  CHECK(heights_only == d);
  CHECK(io::parse_newick("(c:2,(b:1,a:1)1:1)2;", std::vector<std::string>{"a", "b", "c"}) == d);

  CHECK(kind_of([] { io::parse_newick("((a:1,b:1)1:1,c:2)2"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::parse_newick("((a:1,b:2)1:1,c:2)2;"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::parse_newick("(a:1,a:1)1;"); }) == ErrorKind::DuplicateLabel);
}

TEST_CASE("Newick and merge-list round trips") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const Dendrogramd d = random_dendrogram<double>(rng, 1 + trial % 9);
    const std::string text = io::to_newick(d);
    const Ultrametricd u = ultrametric_from_dendrogram(d);
    const Dendrogramd parsed = io::parse_newick(text, d.leaves);
    CHECK(ultrametric_from_dendrogram(parsed) == u);
    CHECK(parsed == dendrogram_from_ultrametric(u));
    CHECK(io::to_newick(parsed) == io::to_newick(dendrogram_from_ultrametric(u)));
    CHECK(io::dendrogram_from_json(io::dendrogram_to_json(d)) == d);
    CHECK(io::dendrogram_from_json(nlohmann::json::parse(io::dendrogram_to_json(d).dump())) == d);
  }
}

TEST_CASE("partition JSON") {
  Matrix<double> m(3, 3);
  m << 0, 2, 1, 2, 0, 2, 1, 2, 0;
  const Partitiond p = cut_at_resolution(validate_ultrametric({"a", "b", "c"}, m), 1.5);
  const nlohmann::json doc = io::partition_to_json(p);
  CHECK(doc["resolution"] == 1.5);
  CHECK(doc["blocks"] == nlohmann::json::parse(R"([["a", "c"], ["b"]])"));
}

TEST_CASE("uses table normalization") {
  Matrix<double> u(2, 2);
  u << 0, 3, 2, 1;
  const Networkd n = io::normalize_uses_table(u, {"s1", "s2"});
  CHECK(n(0, 1) == 1.0 / (3.0 / 4.0));
  CHECK(n(1, 0) == 1.0);

  Matrix<double> zero_col(2, 2);
  zero_col << 0, 3, 0, 1;
  CHECK(kind_of([&] { io::normalize_uses_table(zero_col, {"s1", "s2"}); }) ==
        ErrorKind::ZeroColumn);

  Matrix<double> gap(3, 3);
  gap << 1, 0, 2, 1, 1, 1, 1, 1, 1;
  CHECK(kind_of([&] { io::normalize_uses_table(gap, {"a", "b", "c"}); }) ==
        ErrorKind::ZeroUseEntry);
  const Networkd capped = io::normalize_uses_table(gap, {"a", "b", "c"}, io::parse_zero_use("cap=100"));
  CHECK(capped(0, 1) == 100);
  CHECK(kind_of([] { io::parse_zero_use("sometimes"); }) == ErrorKind::ParseError);
}

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(io::format_number(3.0) == "3");
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(5.0 / 3.0) == "1.6666666666666667");
}
