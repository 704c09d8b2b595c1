#include "doctest.h"

#include <random>

#include "gca/io.hpp"

#include "test_util.hpp"

using namespace gca;
using gca_test::loops_graph;
using gca_test::make_graph;
using gca_test::remark_graph;

TEST_CASE("graph parsing round trips through the serializer") {
  std::string text =
      "# running example\n"
      "vertex 1\n"
      "vertex 2\n"
      "vertex 3\n"
      "edge a 1 1\n"
      "edge b 2 2\n"
      "edge c 1 3\n"
      "edge d 2 3\n";
  Graph g = parse_graph(text);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 4);
  std::string s = serialize_graph(g);
  Graph g2 = parse_graph(s);
  CHECK(serialize_graph(g2) == s);
  CHECK(g2.find_vertex("2") == g.find_vertex("2"));
}

TEST_CASE("graph parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_graph("vertex\n"),
                       "vertex needs an identifier at line 1", Error);
  CHECK_THROWS_WITH_AS(parse_graph("vertex a\nedge e a b\n"),
                       "vertex b used before declaration at line 2", Error);
  CHECK_THROWS_WITH_AS(parse_graph("vertex a extra\n"),
                       "trailing tokens at line 1", Error);
  CHECK_THROWS_WITH_AS(parse_graph("loop a\n"),
                       "unknown directive loop at line 1", Error);
  CHECK_THROWS_AS(parse_graph("vertex a!\n"), Error);
  CHECK_THROWS_AS(parse_graph("vertex a\nvertex a\n"), Error);
  CHECK_NOTHROW(parse_graph("\n\n# only comments\n"));
}

TEST_CASE("monoid literals") {
  Graph g = remark_graph();
  MonoidElement z = parse_monoid_literal(g, "0");
  CHECK(z == zero_element(g));

  MonoidElement c = parse_monoid_literal(g, "1:2,3:1");
  CHECK(c[g.find_vertex("1")] == 2);
  CHECK(c[g.find_vertex("3")] == 1);
  CHECK(c[g.find_vertex("2")] == 0);

  MonoidElement dup = parse_monoid_literal(g, "1:1,1:1");
  CHECK(dup[g.find_vertex("1")] == 2);

  MonoidElement big = parse_monoid_literal(g, "2:123456789012345678901234567890");
  CHECK(big[g.find_vertex("2")] == Int("123456789012345678901234567890"));

  CHECK_THROWS_AS(parse_monoid_literal(g, ""), Error);
  CHECK_THROWS_AS(parse_monoid_literal(g, "1"), Error);
  CHECK_THROWS_AS(parse_monoid_literal(g, "x:1"), Error);
  CHECK_THROWS_AS(parse_monoid_literal(g, "1:-2"), Error);
}

TEST_CASE("input digest is deterministic and content sensitive") {
  CHECK(input_digest("abc") == input_digest("abc"));
  CHECK(input_digest("abc") != input_digest("abd"));
  CHECK(input_digest("").size() == 16);
}

TEST_CASE("report json shapes") {
  Graph g = remark_graph();
  Json shell = report_shell("ideals", serialize_graph(g));
  CHECK(shell["tool_version"] == kToolVersion);
  CHECK(shell["report"] == "ideals");
  CHECK(shell["input_digest"].get<std::string>().size() == 16);

  Json lj = lattice_json(g, IdealLattice::enumerate(g));
  CHECK(lj["size"] == 4);
  CHECK(lj["elements"].size() == 4);
  CHECK(lj["join_irreducibles"].size() == 2);

  Json kj = kdata_json(g, k_groups(g, g.all_vertices()));
  CHECK(kj["k0"]["rank"] == 2);
  CHECK(kj["k1"]["rank"] == 2);
  CHECK(kj["k1_basis"].size() == 2);

  Json gj = group_json(k_groups(loops_graph(3), 1).k0);
  CHECK(gj["rank"] == 0);
  CHECK(gj["torsion"] == Json::array({"2"}));
  CHECK(gj["structure"] == "Z/2");
}

TEST_CASE("tails and verdict json") {
  Graph g = remark_graph();
  IdealLattice lat = IdealLattice::enumerate(g);
  Json tj = tails_json(g, lat, maximal_tails(g, lat));
  REQUIRE(tj.size() == 2);
  for (const auto& t : tj) {
    CHECK(t["kind"] == "circle");
    CHECK(t["crosscheck"]["circle_pattern"] == true);
  }

  Json vj = verdict_json(compare_verdict(g, g));
  CHECK(vj["conclusion"] == "homotopy_equivalent_if_obstruction_vanishes");
  CHECK(vj.contains("winning_psi"));
  CHECK(vj["psi_results"].size() >= 1);

  Json diff = verdict_json(compare_verdict(loops_graph(2), loops_graph(3)));
  CHECK(diff["conclusion"] == "invariants_differ");
  CHECK_FALSE(diff.contains("winning_psi"));
}

TEST_CASE("invariant digest ignores labels and orderings") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = gca_test::random_graph(rng, 5, 8);
    GraphDescription renamed;
    for (int v = g.vertex_count() - 1; v >= 0; --v)
      renamed.vertices.push_back("w" + std::to_string(v));
    for (int e = g.edge_count() - 1; e >= 0; --e)
      renamed.edges.push_back({"f" + std::to_string(e),
                               "w" + std::to_string(g.src(e)),
                               "w" + std::to_string(g.rng(e))});
    Graph g2 = Graph::validate(renamed);
    CHECK(invariant_digest(g) == invariant_digest(g2));
  }
  CHECK(invariant_digest(loops_graph(2)) != invariant_digest(loops_graph(3)));
}

TEST_CASE("corpus scan is deterministic across thread counts") {
  Json a = corpus_scan(42, 15, 4, 8, 1);
  Json b = corpus_scan(42, 15, 4, 8, 4);
  CHECK(a.dump() == b.dump());

  int total = 0;
  for (const auto& bucket : a["buckets"]) {
    total += int(bucket["graphs"].size());
    // relabeled duplicates must share buckets; pairs list every collision
    std::size_t n = bucket["graphs"].size();
    CHECK(bucket["flagged_pairs"].size() == n * (n - 1) / 2);
  }
  CHECK(total == 15);

  Json c = corpus_scan(43, 15, 4, 8);
  CHECK(a.dump() != c.dump());
}
