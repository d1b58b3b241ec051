#include <catch2/catch_amalgamated.hpp>

#include "corrtail/corpus.hpp"
#include "corrtail/graph.hpp"

using namespace corrtail;

TEST_CASE("validation accepts the fixtures") {
  for (const auto& [name, g] : fixtures()) {
    INFO(name);
    CHECK(validate_graph(g).ok());
  }
}

TEST_CASE("validation reports dangling endpoints") {
  Graph g = fixture_e2();
  g.edges.push_back({"bad", "v", "nowhere", Mult::fin(1)});
  auto rep = validate_graph(g);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations.front().code == "dangling rng");
}

TEST_CASE("validation rejects two rays on one vertex") {
  Graph g = fixture_z();
  g.rays.push_back({"r1", "z"});
  g.rays.push_back({"r2", "z"});
  auto rep = validate_graph(g);
  REQUIRE_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.code == "duplicate ray attachment") found = true;
  CHECK(found);
}

TEST_CASE("validation rejects duplicate ids and zero multiplicities") {
  Graph g = fixture_e2();
  g.edges.push_back({"e", "v", "w", Mult::fin(1)});
  CHECK_FALSE(validate_graph(g).ok());

  Graph h = fixture_e2();
  h.edges.front().mult = Mult::fin(0);
  CHECK_FALSE(validate_graph(h).ok());
}

TEST_CASE("classification of E1") {
  auto cls = classify_vertices(fixture_e1());
  CHECK(cls.tag.at("u") == VertexTag::Regular);
  CHECK(cls.tag.at("v") == VertexTag::Regular);
  CHECK(cls.tag.at("w") == VertexTag::Sink);
  CHECK(cls.is_source.at("u"));
  CHECK_FALSE(cls.is_source.at("w"));
  CHECK(regular_vertices(fixture_e1()) == VertexSet::of({"u", "v"}));
}

TEST_CASE("classification of E3: omega edges make infinite emitters") {
  auto cls = classify_vertices(fixture_e3());
  CHECK(cls.tag.at("v") == VertexTag::InfiniteEmitter);
  CHECK(cls.tag.at("w1") == VertexTag::Sink);
  CHECK(cls.tag.at("w2") == VertexTag::Sink);
  CHECK(regular_vertices(fixture_e3()).base.empty());
}

TEST_CASE("an isolated vertex is a sink") {
  auto cls = classify_vertices(fixture_z());
  CHECK(cls.tag.at("z") == VertexTag::Sink);
}

TEST_CASE("classification is a partition and rays count as one edge") {
  for (const auto& [name, g] : exhaustive_graphs(3, 2, true)) {
    auto cls = classify_vertices(g);
    for (const auto& v : g.vertices) {
      INFO(name << " at " << v);
      REQUIRE(cls.tag.count(v) == 1);
    }
  }
  // attaching a ray turns a sink regular
  Graph g = fixture_z();
  g.rays.push_back({"r", "z"});
  CHECK(classify_vertices(g).tag.at("z") == VertexTag::Regular);
}

TEST_CASE("property table on the fixtures") {
  PropertyTable t1 = correspondence_property_table(fixture_e1());
  CHECK(t1.phi_into_compacts);       // row-finite
  CHECK_FALSE(t1.phi_injective);     // w is a sink
  CHECK_FALSE(t1.full);              // u is a source
  CHECK(t1.essential);

  PropertyTable tc = correspondence_property_table(fixture_c5());
  CHECK(tc.phi_into_compacts);
  CHECK(tc.phi_injective);
  CHECK(tc.full);
  CHECK(tc.essential);

  PropertyTable t3 = correspondence_property_table(fixture_e3());
  CHECK_FALSE(t3.phi_into_compacts);  // v emits omega edges
  CHECK_FALSE(t3.phi_delta_v_compact.at("v"));
  CHECK(t3.phi_delta_v_compact.at("w1"));
}

TEST_CASE("phi is injective exactly on sink-free graphs") {
  for (const auto& [name, g] : exhaustive_graphs(3, 2, false)) {
    INFO(name);
    auto cls = classify_vertices(g);
    CHECK(correspondence_property_table(g).phi_injective == cls.sinks().empty());
  }
}
