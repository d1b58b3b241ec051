#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "corrtail/ckfamily.hpp"
#include "corrtail/corpus.hpp"
#include "corrtail/correspondence.hpp"
#include "corrtail/json_io.hpp"
#include "corrtail/lattice.hpp"

namespace corrtail {

struct CorpusSpec {
  int max_n = 4;
  std::uint64_t max_mult = 2;
  bool with_omega = true;
  int random_count = 50;
  int random_max_n = 8;
  std::uint64_t seed = 0xc0a11e5ull;
  int span_budget = 1600;           // skip matrix suites above this dimension
  std::vector<std::uint64_t> depths = {1, 2, 3};
  int v_sweep_cap = 16;             // max V subsets per graph in rep checks
  int pair_cap = 4096;              // max meet/join pairs checked per lattice
  unsigned jobs = 0;                // 0: hardware concurrency
};

enum class CheckStatus { Pass, Fail, Skip };

struct CheckResult {
  std::string instance;
  std::string check;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct SuiteReport {
  CorpusSpec spec;
  std::vector<CheckResult> results;
  size_t passed = 0, failed = 0, skipped = 0;

  bool all_pass() const { return failed == 0; }

  std::vector<CheckResult> failures() const {
    std::vector<CheckResult> out;
    for (const auto& r : results)
      if (r.status == CheckStatus::Fail) out.push_back(r);
    return out;
  }

  size_t count(const std::string& check_prefix, CheckStatus st) const {
    size_t n = 0;
    for (const auto& r : results)
      if (r.status == st && r.check.rfind(check_prefix, 0) == 0) ++n;
    return n;
  }
};

namespace detail {

class Recorder {
 public:
  Recorder(std::string instance, std::vector<CheckResult>& out)
      : instance_(std::move(instance)), out_(out) {}

  void pass(const std::string& check, const std::string& detail = "") {
    out_.push_back({instance_, check, CheckStatus::Pass, detail});
  }
  void fail(const std::string& check, const std::string& detail = "") {
    out_.push_back({instance_, check, CheckStatus::Fail, detail});
  }
  void skip(const std::string& check, const std::string& detail = "") {
    out_.push_back({instance_, check, CheckStatus::Skip, detail});
  }
  void record(const std::string& check, bool ok, const std::string& detail = "") {
    ok ? pass(check) : fail(check, detail);
  }

 private:
  std::string instance_;
  std::vector<CheckResult>& out_;
};

// all subsets of the ordinary vertices and ray flags (the corpus keeps
// these small enough to be exhaustive)
inline std::vector<VertexSet> all_subsets(const Graph& g) {
  std::vector<VertexSet> out;
  size_t n = g.vertices.size(), r = g.rays.size();
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask)
    for (std::uint64_t rmask = 0; rmask < (1ull << r); ++rmask) {
      VertexSet s;
      for (size_t i = 0; i < n; ++i)
        if (mask & (1ull << i)) s.base.push_back(g.vertices[i]);
      for (size_t i = 0; i < r; ++i)
        if (rmask & (1ull << i)) s.rays.push_back(g.rays[i].id);
      s.normalize();
      out.push_back(std::move(s));
    }
  return out;
}

inline std::vector<VertexSet> v_sweep(const VertexSet& reg, int cap) {
  size_t n = reg.base.size();
  std::vector<VertexSet> out;
  if (n <= 20 && (1ull << n) <= static_cast<std::uint64_t>(cap)) {
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
      VertexSet s;
      for (size_t i = 0; i < n; ++i)
        if (mask & (1ull << i)) s.base.push_back(reg.base[i]);
      s.normalize();
      out.push_back(std::move(s));
    }
    return out;
  }
  out.push_back(VertexSet{});
  out.push_back(reg);
  for (size_t i = 0; i < n; ++i) {
    out.push_back(VertexSet::of({reg.base[i]}));
    VertexSet co = reg;
    co.base.erase(std::find(co.base.begin(), co.base.end(), reg.base[i]));
    out.push_back(co);
  }
  return out;
}

struct InstanceContext {
  Graph g;
  VertexClass cls;
  VertexSet reg;
  IdealLattice lat;
  GraphCorrespondence x;
};

inline void check_transforms(const InstanceContext& ctx, const CorpusSpec& spec, Recorder& rec) {
  const Graph& g = ctx.g;
  Graph tailed = add_tails(g);
  rec.record("transforms/add-tails-sink-free", sink_vertices(tailed).base.empty());
  rec.record("transforms/add-tails-idempotent", same_graph(add_tails(tailed), tailed));

  if (g.rays.empty()) {
    rec.record("transforms/truncate-ray-free", same_graph(truncate_tails(g, 4), g));
  }
  Graph trunc = truncate_tails(tailed, 2);
  size_t expect_v = g.vertices.size() + 2 * tailed.rays.size();
  rec.record("transforms/truncate-counts",
             trunc.vertices.size() == expect_v && trunc.rays.empty());

  if (g.rays.empty()) {
    const VertexSet& reg = ctx.reg;
    rec.record("transforms/relative-identity", same_graph(build_relative_graph(g, reg), g));
    for (const auto& v : v_sweep(reg, spec.v_sweep_cap)) {
      Graph ev = build_relative_graph(g, v);
      size_t primes = reg.base.size() - v.base.size();
      size_t extra_edges = 0;
      VertexSet primed = set_minus(reg, v);
      for (const auto& e : g.edges)
        if (primed.contains(e.rng)) ++extra_edges;
      bool ok = ev.vertices.size() == g.vertices.size() + primes &&
                ev.edges.size() == g.edges.size() + extra_edges;
      rec.record("transforms/relative-counts", ok, "V size " + std::to_string(v.base.size()));
      if (!ok) break;
    }
  }

  // closure operators: extensive, idempotent, monotone, landing in the
  // right predicate class
  auto subsets = all_subsets(g);
  size_t step = subsets.size() > static_cast<size_t>(spec.pair_cap)
                    ? subsets.size() / spec.pair_cap + 1
                    : 1;
  bool closure_ok = true;
  std::string closure_witness;
  for (size_t i = 0; i < subsets.size() && closure_ok; i += step) {
    const VertexSet& s = subsets[i];
    VertexSet h = hereditary_closure(g, s);
    VertexSet hs = saturation_closure(g, h, ctx.cls);
    if (!s.subset_of(h) || !h.subset_of(hs)) {
      closure_ok = false;
      closure_witness = "not extensive";
    } else if (!is_hereditary(g, h) || !is_hereditary(g, hs) || !is_saturated(g, hs, ctx.cls)) {
      closure_ok = false;
      closure_witness = "closure misses its predicate";
    } else if (hereditary_closure(g, h) != h || saturation_closure(g, hs, ctx.cls) != hs) {
      closure_ok = false;
      closure_witness = "not idempotent";
    } else if (!s.base.empty()) {
      VertexSet smaller = s;
      smaller.base.erase(smaller.base.begin());
      if (!hereditary_closure(g, smaller).subset_of(h)) {
        closure_ok = false;
        closure_witness = "not monotone";
      }
    }
  }
  rec.record("transforms/closures", closure_ok, closure_witness);

  QuotientResult q0 = quotient_graph(g, VertexSet{});
  rec.record("transforms/quotient-empty",
             same_graph(q0.graph, g) && q0.b_h.empty() && q0.relative_set == ctx.reg);
}

inline void check_lattice(const InstanceContext& ctx, const CorpusSpec& spec, Recorder& rec) {
  const Graph& g = ctx.g;
  const IdealLattice& lat = ctx.lat;

  bool recheck = true;
  for (const auto& h : lat.elements)
    if (hereditary_closure(g, h) != h || saturation_closure(g, h, ctx.cls) != h) recheck = false;
  rec.record("lattice/enumerate-recheck", recheck);

  bool closed = true;
  size_t m = lat.elements.size();
  size_t pairs = m * m;
  size_t step = pairs > static_cast<size_t>(spec.pair_cap) ? pairs / spec.pair_cap + 1 : 1;
  for (size_t k = 0; k < pairs && closed; k += step) {
    int a = static_cast<int>(k / m), b = static_cast<int>(k % m);
    if (lat.meet(a, b) < 0 || lat.join(a, b) < 0) closed = false;
  }
  rec.record("lattice/meet-join-closed", closed);

  if (g.rays.empty()) {
    LatticeIso iso = tails_lattice_map(g);
    rec.record("lattice/tails-iso", iso.ok, iso.counterexample);
  }
}

inline void check_oracle_equivalence(const InstanceContext& ctx, Recorder& rec) {
  const Graph& g = ctx.g;
  const GraphCorrespondence& x = ctx.x;
  bool ok = true;
  std::string witness;
  for (const auto& w : all_subsets(g)) {
    bool inv = is_X_invariant(x, {w});
    bool her = is_hereditary(g, w);
    bool sat_pair = inv && is_X_saturated(x, {w});
    bool her_sat = her && is_saturated(g, w, ctx.cls);
    if (inv != her || sat_pair != her_sat) {
      ok = false;
      witness = "subset of size " + std::to_string(w.size());
      break;
    }
  }
  rec.record("oracle/invariant-saturated-equivalence", ok, witness);
}

inline void check_correspondence(const InstanceContext& ctx, Recorder& rec) {
  const Graph& g = ctx.g;
  const GraphCorrespondence& x = ctx.x;
  rec.record("corr/property-table", x.table_consistent);

  CorrespondenceIdeals ids = compute_ideals(x);
  rec.record("corr/ideal-identities", ids.identities_ok);
  bool row_finite = !has_omega_edge(g);
  VertexSet direct_sum = set_union(ids.j_x.support, ids.ker_phi.support);
  bool decomposes = direct_sum == all_vertices(g) &&
                    set_intersect(ids.j_x.support, ids.ker_phi.support).empty();
  rec.record("corr/jx-kerphi-decomposition", decomposes == row_finite);

  TailedCorrespondence y = add_tail_correspondence(x);
  rec.record("corr/tail-structural", y.structural_match);
  LemmaReport lem = check_tail_lemmas(y);
  rec.record("corr/tail-lemmas", lem.ok(), lem.counterexample);

  bool quotient_ok = true;
  std::string witness;
  for (const auto& h : ctx.lat.elements) {
    QuotientCorrespondence q = quotient_correspondence(x, {h});
    if (!q.subset_ok) {
      quotient_ok = false;
      witness = "q(J_X) escapes J_{X/XI}";
      break;
    }
    if (!q.equal && q.hyp_phi_compact) {
      quotient_ok = false;
      witness = "equality fails with both hypotheses";
      break;
    }
  }
  rec.record("corr/quotient-jx", quotient_ok, witness);
}

inline void check_representations(const InstanceContext& ctx, const CorpusSpec& spec,
                                  Recorder& rec) {
  const Graph& g = ctx.g;
  if (!g.rays.empty()) {
    rec.skip("rep/all", "graph has rays");
    return;
  }
  if (has_omega_edge(g)) {
    rec.skip("rep/all", "omega edge: no finite-dimensional family");
    return;
  }
  if (has_cycle(g)) {
    rec.skip("rep/all", "cycle: family is infinite-dimensional");
    return;
  }

  for (const auto& v : v_sweep(ctx.reg, spec.v_sweep_cap)) {
    std::string vtag = "V={" + [&] {
      std::string s;
      for (const auto& x : v.base) s += (s.empty() ? "" : ",") + x;
      return s;
    }() + "}";
    long long predicted;
    try {
      predicted = expected_family_dim(build_relative_graph(g, v));
    } catch (const SpanBudgetExceeded&) {
      rec.skip("rep/relgas", vtag + ": dimension over budget");
      continue;
    }
    if (predicted > spec.span_budget) {
      rec.skip("rep/relgas", vtag + ": dimension " + std::to_string(predicted) + " over budget");
      continue;
    }

    CKRep rep = path_space_rep(g, v);
    rec.record("rep/ck-relations", verify_ck_relations(rep, v).ok, vtag);
    rec.record("rep/basis-count",
               rep.dim() == path_space_size(rep.ev_graph), vtag);

    RelgasReport rg = verify_relgas(g, v, spec.span_budget);
    rec.record("rep/relgas", rg.ok, vtag + " " + rg.counterexample);

    TKReport tk = defect_and_TK(rep, v);
    rec.record("rep/tk", tk.ok, vtag + " " + tk.witness);

    if (v.base.empty() || v == ctx.reg) {
      GiuReport gid = giu_test(g, v, HomSpec::identity(), spec.span_budget);
      rec.record("rep/giu-identity",
                 gid.hom_ok && gid.conditions_hold() && gid.kernel_dim == 0 && gid.consistent,
                 vtag + " " + gid.witness);
    }
  }

  long long base_dim;
  try {
    base_dim = expected_family_dim(g);
  } catch (const SpanBudgetExceeded&) {
    rec.skip("rep/tails", "dimension over budget");
    return;
  }

  CKRep full = path_space_rep(g, ctx.reg);
  for (std::uint64_t d : spec.depths) {
    std::string dtag = "depth=" + std::to_string(d);
    ExtensionReport ext = extend_representation(full, d);
    rec.record("rep/extension", ext.ok(), dtag + " " + ext.witness);

    Graph trunc = truncate_tails(add_tails(g), d);
    long long tdim;
    try {
      tdim = expected_family_dim(trunc);
    } catch (const SpanBudgetExceeded&) {
      rec.skip("rep/corner", dtag + ": over budget");
      continue;
    }
    if (tdim > spec.span_budget || base_dim > spec.span_budget) {
      rec.skip("rep/corner", dtag + ": dimension " + std::to_string(tdim) + " over budget");
      continue;
    }
    TailLemmaMatrixReport tl = verify_tail_relation_lemmas(g, d, spec.span_budget);
    rec.record("rep/tail-lemmas", tl.ok(), dtag + " " + tl.witness);
    CornerReport cr = verify_corner(g, d, spec.span_budget);
    rec.record("rep/corner", cr.ok(), dtag + " " + cr.witness);
  }

  if (base_dim <= spec.span_budget) {
    for (const auto& h : ctx.lat.elements) {
      if (h.empty()) continue;
      GiuReport gq = giu_test(g, ctx.reg, HomSpec::quotient(h), spec.span_budget);
      bool ok = gq.hom_ok && gq.consistent && gq.kernel_dim > 0 &&
                (!gq.cond_vertices || !gq.cond_defects);
      rec.record("rep/giu-quotient", ok, "H size " + std::to_string(h.size()));
    }
  } else {
    rec.skip("rep/giu-quotient", "dimension over budget");
  }
}

inline void run_instance(const std::string& name, const Graph& g, const CorpusSpec& spec,
                         std::vector<CheckResult>& out) {
  Recorder rec(name, out);
  try {
    ValidationReport val = validate_graph(g);
    rec.record("graph/validate", val.ok(), val.summary());
    if (!val.ok()) return;

    std::string first = canonical_graph_string(g);
    std::string second = canonical_graph_string(parse_graph(first));
    rec.record("serialization/roundtrip", first == second);

    InstanceContext ctx;
    ctx.g = g;
    ctx.cls = classify_vertices(g);
    ctx.reg.base = ctx.cls.regulars();
    ctx.lat = enumerate_saturated_hereditary(g);
    ctx.x = build_graph_correspondence(g);

    check_transforms(ctx, spec, rec);
    check_lattice(ctx, spec, rec);
    check_oracle_equivalence(ctx, rec);
    check_correspondence(ctx, rec);
    check_representations(ctx, spec, rec);
  } catch (const std::exception& e) {
    rec.fail("instance/exception", e.what());
  }
}

}  // namespace detail

inline std::vector<std::pair<std::string, Graph>> build_corpus(const CorpusSpec& spec) {
  std::vector<std::pair<std::string, Graph>> corpus = fixtures();
  for (const auto& [name, g] : fixtures())
    corpus.push_back({name + "+tails", add_tails(g)});
  for (auto& item : exhaustive_graphs(spec.max_n, spec.max_mult, spec.with_omega))
    corpus.push_back(std::move(item));
  for (auto& item : random_graphs(spec.random_count, spec.random_max_n, spec.seed))
    corpus.push_back(std::move(item));
  return corpus;
}

inline SuiteReport run_suite(const CorpusSpec& spec) {
  SuiteReport report;
  report.spec = spec;
  auto corpus = build_corpus(spec);

  unsigned jobs = spec.jobs ? spec.jobs : std::thread::hardware_concurrency();
  if (jobs == 0) jobs = 1;
  jobs = std::min<unsigned>(jobs, corpus.size() ? corpus.size() : 1);

  std::vector<std::vector<CheckResult>> shards(corpus.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      size_t i = cursor.fetch_add(1);
      if (i >= corpus.size()) break;
      detail::run_instance(corpus[i].first, corpus[i].second, spec, shards[i]);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (auto& shard : shards)
    for (auto& r : shard) report.results.push_back(std::move(r));
  std::sort(report.results.begin(), report.results.end(),
            [](const CheckResult& a, const CheckResult& b) {
              if (a.instance != b.instance) return a.instance < b.instance;
              if (a.check != b.check) return a.check < b.check;
              return a.detail < b.detail;
            });
  for (const auto& r : report.results) {
    switch (r.status) {
      case CheckStatus::Pass: ++report.passed; break;
      case CheckStatus::Fail: ++report.failed; break;
      case CheckStatus::Skip: ++report.skipped; break;
    }
  }
  return report;
}

inline json suite_report_to_json(const SuiteReport& rep, bool include_passes = false) {
  json j;
  j["seed"] = rep.spec.seed;
  j["corpus"] = {{"max_n", rep.spec.max_n},
                 {"max_mult", rep.spec.max_mult},
                 {"with_omega", rep.spec.with_omega},
                 {"random_count", rep.spec.random_count},
                 {"random_max_n", rep.spec.random_max_n}};
  j["span_budget"] = rep.spec.span_budget;
  j["passed"] = rep.passed;
  j["failed"] = rep.failed;
  j["skipped"] = rep.skipped;
  j["all_pass"] = rep.all_pass();
  json entries = json::array();
  for (const auto& r : rep.results) {
    if (r.status == CheckStatus::Pass && !include_passes) continue;
    entries.push_back({{"instance", r.instance},
                       {"check", r.check},
                       {"status", r.status == CheckStatus::Pass   ? "pass"
                                  : r.status == CheckStatus::Fail ? "fail"
                                                                  : "skip"},
                       {"detail", r.detail}});
  }
  j["entries"] = entries;
  return j;
}

}  // namespace corrtail
