#include <catch2/catch_amalgamated.hpp>

#include "corrtail/corpus.hpp"
#include "corrtail/lattice.hpp"
#include "oracles.hpp"

using namespace corrtail;

TEST_CASE("E1 lattice is the two-element chain") {
  IdealLattice lat = enumerate_saturated_hereditary(fixture_e1());
  REQUIRE(lat.elements.size() == 2);
  CHECK(lat.elements.front().empty());
  CHECK(lat.elements.back() == VertexSet::of({"u", "v", "w"}));
}

TEST_CASE("E3 lattice has five elements") {
  IdealLattice lat = enumerate_saturated_hereditary(fixture_e3());
  REQUIRE(lat.elements.size() == 5);
  CHECK(lat.index_of(VertexSet::of({"w1"})) >= 0);
  CHECK(lat.index_of(VertexSet::of({"w2"})) >= 0);
  CHECK(lat.index_of(VertexSet::of({"w1", "w2"})) >= 0);
}

TEST_CASE("edgeless graphs have the full boolean lattice") {
  Graph g;
  g.vertices = {"a", "b", "c"};
  CHECK(enumerate_saturated_hereditary(g).elements.size() == 8);
}

TEST_CASE("enumeration agrees with the brute-force subset filter") {
  for (const auto& [name, g] : exhaustive_graphs(3, 2, true)) {
    if (!g.rays.empty()) continue;
    INFO(name);
    auto expected = oracles::sat_her_subsets(g);
    IdealLattice lat = enumerate_saturated_hereditary(g);
    REQUIRE(lat.elements.size() == expected.size());
    for (const auto& base : expected) {
      VertexSet s;
      s.base = base;
      REQUIRE(lat.index_of(s) >= 0);
    }
  }
}

TEST_CASE("meet and join stay inside the lattice") {
  for (const auto& [name, g] :
       {std::pair<std::string, Graph>{"E1", fixture_e1()}, {"E3", fixture_e3()},
        {"C5", fixture_c5()}}) {
    INFO(name);
    IdealLattice lat = enumerate_saturated_hereditary(g);
    int m = static_cast<int>(lat.elements.size());
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        REQUIRE(lat.meet(a, b) >= 0);
        REQUIRE(lat.join(a, b) >= 0);
      }
  }
}

TEST_CASE("tails map is the identity on sink-free graphs") {
  LatticeIso iso = tails_lattice_map(fixture_c5());
  REQUIRE(iso.ok);
  for (const auto& [a, b] : iso.pairs) CHECK(a == b);
}

TEST_CASE("tails map on E1 matches the two-chain") {
  LatticeIso iso = tails_lattice_map(fixture_e1());
  REQUIRE(iso.ok);
  REQUIRE(iso.src.elements.size() == 2);
  REQUIRE(iso.dst.elements.size() == 2);
  // the top element picks up the ray at w
  CHECK(iso.dst.elements.back().rays.size() == 1);
}

TEST_CASE("tails map on the isolated vertex") {
  LatticeIso iso = tails_lattice_map(fixture_z());
  REQUIRE(iso.ok);
  CHECK(iso.src.elements.size() == 2);
}

TEST_CASE("tails map is an order isomorphism over the corpus") {
  for (const auto& [name, g] : exhaustive_graphs(3, 2, true)) {
    if (!g.rays.empty()) continue;
    INFO(name);
    REQUIRE(tails_lattice_map(g).ok);
  }
}

TEST_CASE("lattice report shapes") {
  LatticeReport r1 = lattice_report(enumerate_saturated_hereditary(fixture_e1()));
  CHECK(r1.count == 2);
  REQUIRE(r1.hasse_included);
  CHECK(r1.hasse_edges.size() == 1);

  Graph two;
  two.vertices = {"a", "b"};
  LatticeReport r2 = lattice_report(enumerate_saturated_hereditary(two));
  CHECK(r2.count == 4);
  CHECK(r2.hasse_edges.size() == 4);  // the diamond
  REQUIRE(r2.tables_included);
  CHECK(r2.meet_table[1][2] == 0);
  CHECK(r2.join_table[1][2] == 3);

  LatticeReport r3 = lattice_report(enumerate_saturated_hereditary(fixture_e3()));
  CHECK(r3.count == 5);
  CHECK_FALSE(r3.note.empty());  // not row-finite: restriction recorded
}

TEST_CASE("enumeration budget is enforced") {
  Graph big;
  for (int i = 0; i < 17; ++i) big.vertices.push_back("v" + std::to_string(i));
  CHECK_THROWS_AS(enumerate_saturated_hereditary(big), std::invalid_argument);
}
