#include <catch2/catch_amalgamated.hpp>

#include "corrtail/ckfamily.hpp"
#include "corrtail/corpus.hpp"
#include "oracles.hpp"

using namespace corrtail;

TEST_CASE("extending the E2 representation grows by one tail coordinate per slot") {
  CKRep rep = path_space_rep(fixture_e2(), VertexSet::of({"v"}));
  ExtensionReport ext = extend_representation(rep, 2);
  REQUIRE(ext.ok());
  CHECK(ext.rep.dim() == rep.dim() + 2);  // H_0 = pi(delta_w)H has dimension 1
  CHECK(ext.rep.p.count("tail_w.1") == 1);
  CHECK(ext.rep.p.count("tail_w.2") == 1);
  // restriction: the original block is untouched
  for (int i = 0; i < rep.dim(); ++i)
    for (int j = 0; j < rep.dim(); ++j)
      CHECK(ext.rep.p.at("v").at(i, j) == rep.p.at("v").at(i, j));
}

TEST_CASE("extension of the edgeless vertex is the truncated shift") {
  CKRep rep = path_space_rep(fixture_z(), VertexSet{});
  REQUIRE(rep.dim() == 1);
  ExtensionReport ext = extend_representation(rep, 3);
  REQUIRE(ext.ok());
  CHECK(ext.rep.dim() == 4);
  // t~ on the first tail slot lands in the original coordinate
  const QMat& t1 = ext.rep.s.at("tail_z.e1#1");
  CHECK(t1.at(0, 1) == 1);
  CHECK(t1.trace() == 0);
  // the gauge degrees run 0, -1, -2, -3 down the tail
  CHECK(ext.rep.grading.degree == std::vector<int>{0, -1, -2, -3});
}

TEST_CASE("extension requires a ray-free source and positive depth") {
  CKRep rep = path_space_rep(fixture_z(), VertexSet{});
  CHECK_THROWS_AS(extend_representation(rep, 0), std::invalid_argument);
}

TEST_CASE("extensions satisfy the representation conditions across the corpus") {
  for (const auto& [name, g] : exhaustive_graphs(2, 2, false)) {
    if (has_cycle(g) || g.vertices.empty()) continue;
    INFO(name);
    CKRep rep = path_space_rep(g, regular_vertices(g));
    for (std::uint64_t d : {1ull, 2ull, 3ull}) {
      ExtensionReport ext = extend_representation(rep, d);
      REQUIRE(ext.representation_ok);
      REQUIRE(ext.restriction_ok);
      REQUIRE(ext.ck_ok);
    }
  }
}

TEST_CASE("tail relation lemmas on E1 at depths 1 to 3") {
  for (std::uint64_t d : {1ull, 2ull, 3ull}) {
    TailLemmaMatrixReport rep = verify_tail_relation_lemmas(fixture_e1(), d);
    INFO("depth " << d << " " << rep.witness);
    REQUIRE(rep.ok());
    CHECK(rep.algebra_dim == 16);  // the original M4 inside the truncated model
  }
}

TEST_CASE("final space identity on the edgeless vertex at depth 2") {
  // three basis paths: (z.2), (t2), (t1 t2); t~(eps_1) t~(eps_1)* = pi~(delta_z)
  Graph trunc = truncate_tails(add_tails(fixture_z()), 2);
  CKRep rep = path_space_rep(trunc, regular_vertices(trunc));
  REQUIRE(rep.dim() == 3);
  const QMat& t1 = rep.s.at("tail_z.e1#1");
  CHECK(t1 * t1.adjoint() == rep.p.at("z"));
  TailLemmaMatrixReport lem = verify_tail_relation_lemmas(fixture_z(), 2);
  REQUIRE(lem.ok());
}

TEST_CASE("tail relation lemmas need an acyclic ray-free input") {
  CHECK_THROWS_AS(verify_tail_relation_lemmas(add_tails(fixture_z()), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_tail_relation_lemmas(fixture_e1(), 0), std::invalid_argument);
}

TEST_CASE("corner of the edgeless vertex at depth 1 is the explicit 2x2 picture") {
  CornerReport rep = verify_corner(fixture_z(), 1);
  REQUIRE(rep.ok());
  CHECK(rep.full_dim == 4);    // M2 on the two paths
  CHECK(rep.corner_dim == 1);  // the span of P(z)
  CHECK(rep.core_dim == 1);
}

TEST_CASE("corner of E1 at depth 2 recovers the 16-dimensional algebra") {
  CornerReport rep = verify_corner(fixture_e1(), 2);
  REQUIRE(rep.ok());
  CHECK(rep.corner_dim == 16);
  CHECK(rep.core_dim == 16);
  CHECK(rep.full_dim == oracles::block_dimension(truncate_tails(add_tails(fixture_e1()), 2)));
}

TEST_CASE("corner and tail lemmas across the corpus at depths 1-3") {
  for (const auto& [name, g] : exhaustive_graphs(2, 2, false)) {
    if (has_cycle(g) || g.vertices.empty()) continue;
    INFO(name);
    for (std::uint64_t d : {1ull, 2ull, 3ull}) {
      REQUIRE(verify_tail_relation_lemmas(g, d).ok());
      REQUIRE(verify_corner(g, d).ok());
    }
  }
}

TEST_CASE("faithfulness surrogate: vertex projections never vanish") {
  for (const auto& [name, g] : exhaustive_graphs(3, 2, false)) {
    if (has_cycle(g) || g.vertices.empty()) continue;
    Graph trunc = truncate_tails(add_tails(g), 2);
    CKRep rep = path_space_rep(trunc, regular_vertices(trunc));
    INFO(name);
    for (const auto& [v, m] : rep.p) REQUIRE_FALSE(m.is_zero());
  }
}
