#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "corrtail/ckfamily.hpp"
#include "corrtail/correspondence.hpp"
#include "corrtail/graph.hpp"
#include "corrtail/lattice.hpp"

namespace corrtail {

using json = nlohmann::json;

// --- graphs ------------------------------------------------------------------

inline json mult_to_json(const Mult& m) {
  if (m.omega) return json("omega");
  return json(m.count);
}

inline Mult mult_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "omega") return Mult::om();
    throw std::invalid_argument("mult: expected a positive integer or \"omega\"");
  }
  if (!j.is_number_unsigned() || j.get<std::uint64_t>() == 0)
    throw std::invalid_argument("mult: expected a positive integer or \"omega\"");
  return Mult::fin(j.get<std::uint64_t>());
}

inline json graph_to_json(const Graph& g_in) {
  Graph g = g_in.canonical();
  json j;
  j["vertices"] = g.vertices;
  j["edges"] = json::array();
  for (const auto& e : g.edges)
    j["edges"].push_back({{"id", e.id}, {"src", e.src}, {"rng", e.rng}, {"mult", mult_to_json(e.mult)}});
  j["tails"] = json::array();
  for (const auto& r : g.rays) j["tails"].push_back({{"id", r.id}, {"attach", r.attach}});
  return j;
}

inline Graph graph_from_json(const json& j) {
  Graph g;
  for (const auto& v : j.at("vertices")) g.vertices.push_back(v.get<std::string>());
  if (j.contains("edges"))
    for (const auto& e : j.at("edges"))
      g.edges.push_back({e.at("id").get<std::string>(), e.at("src").get<std::string>(),
                         e.at("rng").get<std::string>(), mult_from_json(e.at("mult"))});
  if (j.contains("tails"))
    for (const auto& r : j.at("tails"))
      g.rays.push_back({r.at("id").get<std::string>(), r.at("attach").get<std::string>()});
  return g;
}

inline std::string canonical_graph_string(const Graph& g) { return graph_to_json(g).dump(2) + "\n"; }

inline Graph parse_graph(const std::string& text) { return graph_from_json(json::parse(text)); }

// --- vertex sets ---------------------------------------------------------------

inline json vertex_set_to_json(const VertexSet& s) {
  json j;
  j["base"] = s.base;
  j["rays"] = s.rays;
  return j;
}

inline VertexSet vertex_set_from_json(const json& j) {
  VertexSet s;
  if (j.is_array()) {  // bare list shorthand
    for (const auto& v : j) s.base.push_back(v.get<std::string>());
  } else {
    if (j.contains("base"))
      for (const auto& v : j.at("base")) s.base.push_back(v.get<std::string>());
    if (j.contains("rays"))
      for (const auto& r : j.at("rays")) s.rays.push_back(r.get<std::string>());
  }
  s.normalize();
  return s;
}

// --- matrices -------------------------------------------------------------------

// Dense arrays of [numerator, denominator] pairs.
inline json qmat_to_json(const QMat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) {
      const Rational& q = m.at(r, c);
      row.push_back({boost::multiprecision::numerator(q).str(),
                     boost::multiprecision::denominator(q).str()});
    }
    rows.push_back(row);
  }
  return rows;
}

inline QMat qmat_from_json(const json& j) {
  int rows = static_cast<int>(j.size());
  int cols = rows ? static_cast<int>(j.at(0).size()) : 0;
  QMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const json& cell = j.at(r).at(c);
      Rational num(cell.at(0).get<std::string>());
      Rational den(cell.at(1).get<std::string>());
      m.at(r, c) = num / den;
    }
  return m;
}

inline json ckrep_to_json(const CKRep& rep) {
  json j;
  j["graph"] = graph_to_json(rep.graph);
  j["v_set"] = vertex_set_to_json(rep.v_set);
  j["ev_graph"] = graph_to_json(rep.ev_graph);
  j["basis"] = rep.basis;
  j["degree"] = rep.grading.degree;
  json p = json::object(), s = json::object();
  for (const auto& [v, m] : rep.p) p[v] = qmat_to_json(m);
  for (const auto& [c, m] : rep.s) s[c] = qmat_to_json(m);
  j["p"] = p;
  j["s"] = s;
  return j;
}

// --- hom specs -------------------------------------------------------------------

inline HomSpec hom_spec_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity") return HomSpec::identity();
  if (kind == "quotient") return HomSpec::quotient(vertex_set_from_json(j.at("set")));
  if (kind == "collapse") return HomSpec::collapse(vertex_set_from_json(j.at("set")));
  if (kind == "explicit") {
    HomSpec h;
    h.kind = HomSpec::Kind::Explicit;
    h.target_dim = j.at("dim").get<int>();
    for (const auto& d : j.at("degree")) h.target_degree.push_back(d.get<int>());
    for (auto it = j.at("p").begin(); it != j.at("p").end(); ++it)
      h.p_img.emplace(it.key(), qmat_from_json(it.value()));
    for (auto it = j.at("s").begin(); it != j.at("s").end(); ++it)
      h.s_img.emplace(it.key(), qmat_from_json(it.value()));
    return h;
  }
  throw std::invalid_argument("hom spec: unknown kind " + kind);
}

// --- reports ---------------------------------------------------------------------

inline json validation_to_json(const ValidationReport& r) {
  json j;
  j["ok"] = r.ok();
  j["violations"] = json::array();
  for (const auto& v : r.violations) j["violations"].push_back({{"code", v.code}, {"detail", v.detail}});
  return j;
}

inline json property_table_to_json(const PropertyTable& t) {
  json j;
  j["phi_delta_v_compact"] = t.phi_delta_v_compact;
  j["phi_into_compacts"] = t.phi_into_compacts;
  j["phi_injective"] = t.phi_injective;
  j["full"] = t.full;
  j["essential"] = t.essential;
  return j;
}

inline json ideals_to_json(const CorrespondenceIdeals& ids) {
  json j;
  j["ker_phi"] = vertex_set_to_json(ids.ker_phi.support);
  j["J(X)"] = vertex_set_to_json(ids.j_big.support);
  j["J_X"] = vertex_set_to_json(ids.j_x.support);
  j["identities_ok"] = ids.identities_ok;
  return j;
}

inline json lattice_to_json(const IdealLattice& lat) {
  json j;
  j["count"] = lat.elements.size();
  j["elements"] = json::array();
  for (const auto& e : lat.elements) j["elements"].push_back(vertex_set_to_json(e));
  return j;
}

inline json lattice_report_to_json(const LatticeReport& rep) {
  json j;
  j["count"] = rep.count;
  j["elements"] = json::array();
  for (const auto& e : rep.elements) j["elements"].push_back(vertex_set_to_json(e));
  if (rep.hasse_included) {
    j["hasse_edges"] = json::array();
    for (const auto& [a, b] : rep.hasse_edges) j["hasse_edges"].push_back({a, b});
  }
  if (rep.tables_included) {
    j["meet"] = rep.meet_table;
    j["join"] = rep.join_table;
  }
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

inline json lattice_iso_to_json(const LatticeIso& iso) {
  json j;
  j["ok"] = iso.ok;
  j["source"] = lattice_to_json(iso.src);
  j["target"] = lattice_to_json(iso.dst);
  j["pairs"] = json::array();
  for (const auto& [a, b] : iso.pairs) j["pairs"].push_back({a, b});
  if (!iso.counterexample.empty()) j["counterexample"] = iso.counterexample;
  return j;
}

inline json ck_report_to_json(const CKReport& r) {
  json j;
  j["ok"] = r.ok;
  j["failures"] = json::array();
  for (const auto& c : r.checks)
    if (!c.pass) j["failures"].push_back({{"relation", c.relation}, {"witness", c.witness}});
  json defects = json::array();
  for (const auto& [v, rank] : r.strict_defects)
    defects.push_back({{"vertex", v}, {"rank", rank.str()}});
  j["strict_defects"] = defects;
  return j;
}

inline json relgas_to_json(const RelgasReport& r) {
  json j;
  j["ok"] = r.ok;
  j["ck_ok"] = r.ck_ok;
  j["generation_ok"] = r.generation_ok;
  j["spans_equal"] = r.spans_equal;
  j["dim_family"] = r.dim_family;
  j["dim_ev_family"] = r.dim_ev_family;
  j["dim_expected"] = r.dim_expected;
  if (!r.counterexample.empty()) j["counterexample"] = r.counterexample;
  return j;
}

inline json tk_to_json(const TKReport& r) {
  json j;
  j["ok"] = r.ok;
  j["coisometric_on_k"] = r.coisometric_on_k;
  j["multiplicative"] = r.multiplicative;
  j["zero_iff_v"] = r.zero_iff_v;
  if (!r.witness.empty()) j["witness"] = r.witness;
  return j;
}

inline json tail_lemma_matrix_to_json(const TailLemmaMatrixReport& r) {
  json j;
  j["ok"] = r.ok();
  j["im_relations_ok"] = r.im_relations_ok;
  j["im_perp_ok"] = r.im_perp_ok;
  j["final_space_ok"] = r.final_space_ok;
  j["algebra_dim"] = r.algebra_dim;
  if (!r.witness.empty()) j["witness"] = r.witness;
  return j;
}

inline json corner_to_json(const CornerReport& r) {
  json j;
  j["ok"] = r.ok();
  j["relations_ok"] = r.relations_ok;
  j["corner_equals_core"] = r.corner_equals_core;
  j["corner_full"] = r.corner_full;
  j["full_dim"] = r.full_dim;
  j["corner_dim"] = r.corner_dim;
  j["core_dim"] = r.core_dim;
  if (!r.witness.empty()) j["witness"] = r.witness;
  return j;
}

inline json giu_to_json(const GiuReport& r) {
  json j;
  j["hom_ok"] = r.hom_ok;
  j["cond_vertices"] = r.cond_vertices;
  j["cond_defects"] = r.cond_defects;
  j["cond_gauge"] = r.cond_gauge;
  j["kernel_dim"] = r.kernel_dim;
  j["algebra_dim"] = r.algebra_dim;
  j["consistent"] = r.consistent;
  j["failed_vertices"] = r.failed_vertices;
  j["failed_defects"] = r.failed_defects;
  if (!r.witness.empty()) j["witness"] = r.witness;
  return j;
}

inline json lemma_report_to_json(const LemmaReport& r) {
  json j;
  j["ok"] = r.ok();
  j["phi_b_injective"] = r.phi_b_injective;
  j["j_y_matches"] = r.j_y_matches;
  j["j_y_computed"] = vertex_set_to_json(r.j_y_computed);
  j["j_y_expected"] = vertex_set_to_json(r.j_y_expected);
  if (!r.counterexample.empty()) j["counterexample"] = r.counterexample;
  return j;
}

inline json quotient_corr_to_json(const QuotientCorrespondence& r) {
  json j;
  j["quotient_graph"] = graph_to_json(r.quotient.graph);
  j["q_JX"] = vertex_set_to_json(r.q_jx.support);
  j["J_of_quotient"] = vertex_set_to_json(r.j_of_quotient.support);
  j["subset_ok"] = r.subset_ok;
  j["equal"] = r.equal;
  j["hyp_phi_compact"] = r.hyp_phi_compact;
  j["hyp_ker_complemented"] = r.hyp_ker_complemented;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

// --- DOT export -------------------------------------------------------------------

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Omega edges carry the label "ω"; rays render as a 3-node chain ending in
// an ellipsis node.
inline std::string dot_export(const Graph& g_in) {
  Graph g = g_in.canonical();
  std::string out = "digraph corrtail {\n  rankdir=LR;\n";
  for (const auto& v : g.vertices) out += "  " + dot_quote(v) + ";\n";
  for (const auto& e : g.edges) {
    std::string label = e.id;
    if (e.mult.omega)
      label = "\xCF\x89";  // ω
    else if (e.mult.count > 1)
      label = e.id + " x" + std::to_string(e.mult.count);
    out += "  " + dot_quote(e.src) + " -> " + dot_quote(e.rng) + " [label=" + dot_quote(label) +
           "];\n";
  }
  for (const auto& r : g.rays) {
    std::string v1 = ray_vertex_name(r.id, 1);
    std::string v2 = ray_vertex_name(r.id, 2);
    std::string dots = r.id + ".ellipsis";
    out += "  " + dot_quote(v1) + " [shape=circle];\n";
    out += "  " + dot_quote(v2) + " [shape=circle];\n";
    out += "  " + dot_quote(dots) + " [label=\"\xE2\x8B\xAF\", shape=none];\n";
    out += "  " + dot_quote(r.attach) + " -> " + dot_quote(v1) + ";\n";
    out += "  " + dot_quote(v1) + " -> " + dot_quote(v2) + ";\n";
    out += "  " + dot_quote(v2) + " -> " + dot_quote(dots) + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace corrtail
