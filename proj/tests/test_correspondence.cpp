#include <catch2/catch_amalgamated.hpp>

#include "corrtail/corpus.hpp"
#include "corrtail/correspondence.hpp"

using namespace corrtail;

TEST_CASE("multiplicity matrices of the fixtures") {
  GraphCorrespondence x = build_graph_correspondence(fixture_e1());
  CHECK(x.out_mult.at("u").at("v") == Mult::fin(1));
  CHECK(x.out_mult.at("u").at("w") == Mult::fin(1));
  CHECK(x.out_mult.at("v").at("w") == Mult::fin(1));
  CHECK(x.out_mult.count("w") == 0);
  CHECK(x.in_mult.at("w").size() == 2);
  CHECK(x.table_consistent);

  GraphCorrespondence e3 = build_graph_correspondence(fixture_e3());
  CHECK(e3.out_mult.at("v").at("w1") == Mult::om());
  CHECK(e3.out_mult.at("v").at("w2") == Mult::fin(1));

  GraphCorrespondence z = build_graph_correspondence(fixture_z());
  CHECK(z.out_mult.empty());
}

TEST_CASE("ideals of E1: ker phi, J(X), J_X") {
  auto ids = compute_ideals(build_graph_correspondence(fixture_e1()));
  CHECK(ids.ker_phi.support == VertexSet::of({"w"}));
  CHECK(ids.j_big.support == VertexSet::of({"u", "v", "w"}));
  CHECK(ids.j_x.support == VertexSet::of({"u", "v"}));
  CHECK(ids.identities_ok);
}

TEST_CASE("ideals of C5: everything in sight") {
  auto ids = compute_ideals(build_graph_correspondence(fixture_c5()));
  CHECK(ids.ker_phi.support.empty());
  CHECK(ids.j_big.support == VertexSet::of({"v"}));
  CHECK(ids.j_x.support == VertexSet::of({"v"}));
}

TEST_CASE("ideals of E3: the infinite emitter drops out") {
  auto ids = compute_ideals(build_graph_correspondence(fixture_e3()));
  CHECK(ids.ker_phi.support == VertexSet::of({"w1", "w2"}));
  CHECK(ids.j_big.support == VertexSet::of({"w1", "w2"}));
  CHECK(ids.j_x.support.empty());
}

TEST_CASE("J_X = J(X) ∩ (ker phi)^perp over the corpus") {
  for (const auto& [name, g] : exhaustive_graphs(3, 2, true)) {
    INFO(name);
    auto ids = compute_ideals(build_graph_correspondence(g));
    REQUIRE(ids.identities_ok);
    bool row_finite = !has_omega_edge(g);
    bool decomposes =
        set_union(ids.j_x.support, ids.ker_phi.support) == all_vertices(g) &&
        set_intersect(ids.j_x.support, ids.ker_phi.support).empty();
    REQUIRE(decomposes == row_finite);
  }
}

TEST_CASE("invariance and saturation on the fixtures") {
  GraphCorrespondence e1 = build_graph_correspondence(fixture_e1());
  CHECK(is_X_invariant(e1, {VertexSet::of({"w"})}));
  CHECK_FALSE(is_X_saturated(e1, {VertexSet::of({"w"})}));  // v is forced
  CHECK(is_X_invariant(e1, {VertexSet{}}));
  CHECK(is_X_saturated(e1, {VertexSet{}}));

  GraphCorrespondence e3 = build_graph_correspondence(fixture_e3());
  CHECK(is_X_invariant(e3, {VertexSet::of({"w1"})}));
  CHECK(is_X_saturated(e3, {VertexSet::of({"w1"})}));  // J_X is empty
}

TEST_CASE("module predicates match the graph predicates exhaustively") {
  for (const auto& [name, g] : exhaustive_graphs(3, 2, true)) {
    INFO(name);
    GraphCorrespondence x = build_graph_correspondence(g);
    size_t n = g.vertices.size();
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
      VertexSet w;
      for (size_t i = 0; i < n; ++i)
        if (mask & (1ull << i)) w.base.push_back(g.vertices[i]);
      w.normalize();
      REQUIRE(is_X_invariant(x, {w}) == is_hereditary(g, w));
      REQUIRE((is_X_invariant(x, {w}) && is_X_saturated(x, {w})) ==
              (is_hereditary(g, w) && is_saturated(g, w)));
    }
  }
}

TEST_CASE("quotient correspondence by the full set is zero") {
  GraphCorrespondence e1 = build_graph_correspondence(fixture_e1());
  QuotientCorrespondence q = quotient_correspondence(e1, {all_vertices(fixture_e1())});
  CHECK(q.quotient.graph.vertices.empty());
  CHECK(q.q_jx.support.empty());
  CHECK(q.equal);
}

TEST_CASE("quotient by zero is the identity; loop plus exit edge") {
  Graph g = fixture_c5();
  g.vertices.push_back("w");
  g.edges.push_back({"x", "v", "w", Mult::fin(1)});
  GraphCorrespondence corr = build_graph_correspondence(g);
  QuotientCorrespondence q = quotient_correspondence(corr, {VertexSet{}});
  CHECK(same_graph(q.quotient.graph, g));
  CHECK(q.q_jx.support == compute_ideals(corr).j_x.support);
  CHECK(q.equal);
}

TEST_CASE("quotient of E3 by {w1}: the row-finiteness hypothesis fails") {
  GraphCorrespondence e3 = build_graph_correspondence(fixture_e3());
  QuotientCorrespondence q = quotient_correspondence(e3, {VertexSet::of({"w1"})});
  CHECK(q.subset_ok);
  CHECK_FALSE(q.equal);  // q(J_X) is empty but v is regular in the quotient
  CHECK(q.j_of_quotient.support == VertexSet::of({"v"}));
  CHECK_FALSE(q.hyp_phi_compact);
  CHECK(q.hyp_ker_complemented);
  CHECK(q.note.find("row-finite") != std::string::npos);
}

TEST_CASE("quotient correspondence rejects non-invariant ideals") {
  GraphCorrespondence e1 = build_graph_correspondence(fixture_e1());
  CHECK_THROWS_AS(quotient_correspondence(e1, {VertexSet::of({"u"})}), std::invalid_argument);
}

TEST_CASE("adding the tail at the correspondence level") {
  // no sinks: the tail is zero
  TailedCorrespondence c5 = add_tail_correspondence(build_graph_correspondence(fixture_c5()));
  CHECK(c5.tail_blocks.empty());
  CHECK(c5.structural_match);

  // E1: one block, sitting at the sink w
  TailedCorrespondence e1 = add_tail_correspondence(build_graph_correspondence(fixture_e1()));
  REQUIRE(e1.tail_blocks.size() == 1);
  CHECK(e1.tail_blocks.front().attach == "w");
  CHECK(e1.structural_match);
  CHECK(e1.epsilon_vertex(e1.tail_blocks.front().id, 3) == e1.tail_blocks.front().id + ".3");

  // edgeless: Y is the pure tail
  TailedCorrespondence z = add_tail_correspondence(build_graph_correspondence(fixture_z()));
  REQUIRE(z.tail_blocks.size() == 1);
  CHECK(z.structural_match);
}

TEST_CASE("tail lemmas at the correspondence level") {
  for (const auto& [name, g] : fixtures()) {
    INFO(name);
    LemmaReport rep = check_tail_lemmas(add_tail_correspondence(build_graph_correspondence(g)));
    REQUIRE(rep.phi_b_injective);
    REQUIRE(rep.j_y_matches);
  }
  // E3: v stays an infinite emitter, so J(Y) excludes it
  LemmaReport rep = check_tail_lemmas(add_tail_correspondence(build_graph_correspondence(fixture_e3())));
  CHECK_FALSE(rep.j_y_computed.contains("v"));
  CHECK(rep.j_y_computed.rays.size() == 2);
}

TEST_CASE("tail lemmas across the corpus") {
  for (const auto& [name, g] : exhaustive_graphs(3, 2, true)) {
    INFO(name);
    REQUIRE(check_tail_lemmas(add_tail_correspondence(build_graph_correspondence(g))).ok());
  }
}
