// corrtail: command-line front end.
//
// Subcommands: transform, lattice, corr, rep, suite, export.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "corrtail/corrtail.hpp"

namespace {

using namespace corrtail;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void emit(const std::string& path, const json& j) {
  std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

Graph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

VertexSet load_set(const std::string& path) {
  return vertex_set_from_json(json::parse(read_file(path)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact calculator for graph algebras, correspondences, and tails"};
  app.require_subcommand(1);

  // ---- transform ----
  std::string t_op, t_in, t_set, t_out, t_dot;
  std::uint64_t t_depth = 1;
  auto* t = app.add_subcommand("transform", "graph-level constructions");
  t->add_option("--op", t_op, "add-tails | truncate | relative | quotient")->required();
  t->add_option("--in", t_in, "input graph JSON")->required();
  t->add_option("--set", t_set, "vertex set JSON (relative, quotient)");
  t->add_option("--depth", t_depth, "truncation depth");
  t->add_option("--out", t_out, "output graph JSON");
  t->add_option("--dot", t_dot, "also write a DOT rendering");

  // ---- lattice ----
  std::string l_in, l_out;
  bool l_verify_tails = false;
  auto* l = app.add_subcommand("lattice", "saturated hereditary vertex sets");
  l->add_option("--in", l_in)->required();
  l->add_flag("--verify-tails", l_verify_tails, "verify the add-tails lattice isomorphism");
  l->add_option("--out", l_out);

  // ---- corr ----
  std::string c_op, c_in, c_set, c_out;
  auto* c = app.add_subcommand("corr", "correspondence calculus");
  c->add_option("--op", c_op, "ideals | invariant | saturated | quotient | add-tail | check-lemmas")
      ->required();
  c->add_option("--in", c_in)->required();
  c->add_option("--set", c_set, "ideal support JSON");
  c->add_option("--out", c_out);

  // ---- rep ----
  std::string r_op, r_in, r_set, r_hom, r_out;
  std::optional<std::uint64_t> r_depth;
  auto* r = app.add_subcommand("rep", "matrix Cuntz-Krieger families");
  r->add_option("--op", r_op, "build | verify | relgas | corner | giu | tk")->required();
  r->add_option("--in", r_in)->required();
  r->add_option("--set", r_set, "V JSON (defaults to all regular vertices)");
  r->add_option("--depth", r_depth, "tail truncation depth");
  r->add_option("--hom", r_hom, "homomorphism spec JSON for giu");
  r->add_option("--out", r_out);

  // ---- suite ----
  CorpusSpec spec;
  std::string s_out;
  bool s_verbose = false;
  auto* s = app.add_subcommand("suite", "run the verification suite over a corpus");
  s->add_option("--max-n", spec.max_n, "exhaustive corpus vertex bound");
  s->add_option("--max-mult", spec.max_mult, "exhaustive corpus multiplicity bound");
  s->add_flag("!--no-omega", spec.with_omega, "drop omega-multiplicity variants");
  s->add_option("--random", spec.random_count, "number of seeded random graphs");
  s->add_option("--random-max-n", spec.random_max_n);
  s->add_option("--seed", spec.seed, "corpus seed (CORRTAIL_SEED overrides)");
  s->add_option("--span-budget", spec.span_budget, "skip matrix suites above this dimension");
  s->add_option("--jobs", spec.jobs, "worker threads (0 = hardware)");
  s->add_flag("--verbose", s_verbose, "include passing checks in the report");
  s->add_option("--out", s_out);

  // ---- export ----
  std::string e_in, e_format = "json", e_out;
  auto* ex = app.add_subcommand("export", "serialize a graph");
  ex->add_option("--in", e_in)->required();
  ex->add_option("--format", e_format, "json | dot");
  ex->add_option("--out", e_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*t) {
      Graph g = load_graph(t_in);
      json extra;
      Graph result;
      if (t_op == "add-tails") {
        result = add_tails(g);
      } else if (t_op == "truncate") {
        result = truncate_tails(g, t_depth);
      } else if (t_op == "relative") {
        if (t_set.empty()) throw std::runtime_error("relative requires --set");
        result = build_relative_graph(g, load_set(t_set));
      } else if (t_op == "quotient") {
        if (t_set.empty()) throw std::runtime_error("quotient requires --set");
        QuotientResult q = quotient_graph(g, load_set(t_set));
        result = q.graph;
        extra["B_H"] = vertex_set_to_json(q.b_h);
        extra["relative_set"] = vertex_set_to_json(q.relative_set);
      } else {
        throw std::runtime_error("unknown transform op: " + t_op);
      }
      if (!t_out.empty())
        write_file(t_out, canonical_graph_string(result));
      else
        std::cout << canonical_graph_string(result);
      if (!t_dot.empty()) write_file(t_dot, dot_export(result));
      if (!extra.empty()) std::cout << extra.dump(2) << "\n";
      return 0;
    }

    if (*l) {
      Graph g = load_graph(l_in);
      IdealLattice lat = enumerate_saturated_hereditary(g);
      json j = lattice_report_to_json(lattice_report(lat));
      if (l_verify_tails) j["tails_iso"] = lattice_iso_to_json(tails_lattice_map(g));
      emit(l_out, j);
      return 0;
    }

    if (*c) {
      Graph g = load_graph(c_in);
      GraphCorrespondence x = build_graph_correspondence(g);
      json j;
      if (c_op == "ideals") {
        j = ideals_to_json(compute_ideals(x));
        j["property_table"] = property_table_to_json(x.table);
      } else if (c_op == "invariant" || c_op == "saturated") {
        if (c_set.empty()) throw std::runtime_error(c_op + " requires --set");
        IdealOfA ideal{load_set(c_set)};
        j["invariant"] = is_X_invariant(x, ideal);
        if (c_op == "saturated") j["saturated"] = is_X_saturated(x, ideal);
      } else if (c_op == "quotient") {
        if (c_set.empty()) throw std::runtime_error("quotient requires --set");
        j = quotient_corr_to_json(quotient_correspondence(x, {load_set(c_set)}));
      } else if (c_op == "add-tail") {
        TailedCorrespondence y = add_tail_correspondence(x);
        j["tailed_graph"] = graph_to_json(y.tailed_graph);
        j["structural_match"] = y.structural_match;
        json blocks = json::array();
        for (const auto& b : y.tail_blocks) blocks.push_back({{"id", b.id}, {"attach", b.attach}});
        j["tail_blocks"] = blocks;
      } else if (c_op == "check-lemmas") {
        j = lemma_report_to_json(check_tail_lemmas(add_tail_correspondence(x)));
      } else {
        throw std::runtime_error("unknown corr op: " + c_op);
      }
      emit(c_out, j);
      return 0;
    }

    if (*r) {
      Graph g = load_graph(r_in);
      VertexSet v = r_set.empty() ? regular_vertices(g.rays.empty() ? g : truncate_tails(g, r_depth.value_or(1)))
                                  : load_set(r_set);
      json j;
      if (r_op == "build") {
        j = ckrep_to_json(path_space_rep(g, v, r_depth));
      } else if (r_op == "verify") {
        CKRep rep = path_space_rep(g, v, r_depth);
        j = ck_report_to_json(verify_ck_relations(rep, rep.v_set));
      } else if (r_op == "relgas") {
        j = relgas_to_json(verify_relgas(g, v));
      } else if (r_op == "corner") {
        std::uint64_t d = r_depth.value_or(1);
        j["corner"] = corner_to_json(verify_corner(g, d));
        j["tail_lemmas"] = tail_lemma_matrix_to_json(verify_tail_relation_lemmas(g, d));
      } else if (r_op == "giu") {
        HomSpec hom = r_hom.empty() ? HomSpec::identity()
                                    : hom_spec_from_json(json::parse(read_file(r_hom)));
        j = giu_to_json(giu_test(g, v, hom));
      } else if (r_op == "tk") {
        CKRep rep = path_space_rep(g, v, r_depth);
        j = tk_to_json(defect_and_TK(rep, rep.v_set));
      } else {
        throw std::runtime_error("unknown rep op: " + r_op);
      }
      emit(r_out, j);
      return 0;
    }

    if (*s) {
      if (const char* env = std::getenv("CORRTAIL_SEED")) spec.seed = std::stoull(env);
      SuiteReport rep = run_suite(spec);
      emit(s_out, suite_report_to_json(rep, s_verbose));
      std::cerr << "suite: " << rep.passed << " passed, " << rep.failed << " failed, "
                << rep.skipped << " skipped\n";
      return rep.all_pass() ? 0 : 1;
    }

    if (*ex) {
      Graph g = load_graph(e_in);
      if (e_format == "json") {
        if (e_out.empty())
          std::cout << canonical_graph_string(g);
        else
          write_file(e_out, canonical_graph_string(g));
      } else if (e_format == "dot") {
        if (e_out.empty())
          std::cout << dot_export(g);
        else
          write_file(e_out, dot_export(g));
      } else {
        throw std::runtime_error("unknown format: " + e_format);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
