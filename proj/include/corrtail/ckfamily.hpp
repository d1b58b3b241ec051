#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrtail/graph.hpp"
#include "corrtail/matrix.hpp"
#include "corrtail/span.hpp"
#include "corrtail/transforms.hpp"

namespace corrtail {

// --- edge copies and path bases ---------------------------------------------

// One parallel copy of an edge. Multiplicity-m edges act as m separate
// partial isometries; copies carry an index 1..m.
struct EdgeCopy {
  std::string edge_id;
  std::uint64_t copy = 1;
  std::string src;
  std::string rng;

  std::string label() const { return edge_id + "#" + std::to_string(copy); }
};

inline std::vector<EdgeCopy> edge_copies(const Graph& g) {
  std::vector<EdgeCopy> out;
  for (const auto& e : g.edges) {
    if (e.mult.omega)
      throw std::invalid_argument("edge_copies: omega multiplicity has no finite copy list");
    for (std::uint64_t k = 1; k <= e.mult.count; ++k) out.push_back({e.id, k, e.src, e.rng});
  }
  std::sort(out.begin(), out.end(), [](const EdgeCopy& a, const EdgeCopy& b) {
    return a.edge_id != b.edge_id ? a.edge_id < b.edge_id : a.copy < b.copy;
  });
  return out;
}

// A finite path: copies[0] copies[1] ... with rng(copies[i]) = src(copies[i+1]).
// The empty path sits at `start`.
struct Path {
  std::string start;
  std::vector<int> copies;  // indices into the copy table

  int length() const { return static_cast<int>(copies.size()); }
};

// Basis of the path space of a finite acyclic ordinary graph: all paths
// whose range is a sink, ordered by (length, labels).
struct PathSpace {
  Graph graph;
  std::vector<EdgeCopy> copies;
  std::vector<Path> paths;
  std::map<std::string, int> index_by_label;

  std::string label(const Path& p) const {
    if (p.copies.empty()) return "(" + p.start + ")";
    std::string s = "(";
    for (size_t i = 0; i < p.copies.size(); ++i) {
      if (i) s += ".";
      s += copies[p.copies[i]].label();
    }
    return s + ")";
  }

  std::string end_vertex(const Path& p) const {
    return p.copies.empty() ? p.start : copies[p.copies.back()].rng;
  }

  int dim() const { return static_cast<int>(paths.size()); }
};

inline PathSpace enumerate_path_space(const Graph& g) {
  require_valid(g);
  if (!g.rays.empty())
    throw std::invalid_argument("path space: graph must be ray-free (truncate first)");
  if (has_omega_edge(g))
    throw std::invalid_argument("path space: omega edges admit no finite-dimensional family");
  if (has_cycle(g))
    throw std::invalid_argument("path space: graph has a cycle; the family is infinite-dimensional");

  PathSpace ps;
  ps.graph = g;
  ps.copies = edge_copies(g);
  VertexClass cls = classify_vertices(g);

  std::map<std::string, std::vector<int>> out_copies;
  for (size_t i = 0; i < ps.copies.size(); ++i)
    out_copies[ps.copies[i].src].push_back(static_cast<int>(i));

  // memoized continuations: every path from v runs until a sink
  std::map<std::string, std::vector<Path>> from;
  auto paths_from = [&](auto&& self, const std::string& v) -> const std::vector<Path>& {
    auto it = from.find(v);
    if (it != from.end()) return it->second;
    std::vector<Path> acc;
    if (cls.tag.at(v) == VertexTag::Sink) {
      acc.push_back(Path{v, {}});
    } else {
      for (int ci : out_copies[v]) {
        for (const Path& rest : self(self, ps.copies[ci].rng)) {
          Path p{v, {ci}};
          p.copies.insert(p.copies.end(), rest.copies.begin(), rest.copies.end());
          acc.push_back(std::move(p));
        }
      }
    }
    return from.emplace(v, std::move(acc)).first->second;
  };

  for (const auto& v : g.vertices)
    for (const Path& p : paths_from(paths_from, v)) ps.paths.push_back(p);

  std::sort(ps.paths.begin(), ps.paths.end(), [&](const Path& a, const Path& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    if (a.copies.empty()) return a.start < b.start;
    for (size_t i = 0; i < a.copies.size(); ++i) {
      const std::string la = ps.copies[a.copies[i]].label();
      const std::string lb = ps.copies[b.copies[i]].label();
      if (la != lb) return la < lb;
    }
    return false;
  });
  for (size_t i = 0; i < ps.paths.size(); ++i)
    ps.index_by_label[ps.label(ps.paths[i])] = static_cast<int>(i);
  return ps;
}

// --- path counting (no enumeration) -----------------------------------------

// Number of paths from v ending at a sink; the dimension bookkeeping route
// that double-checks the enumerated basis.
inline long long count_paths_from(const Graph& g, const std::string& v,
                                  std::map<std::string, long long>& memo) {
  if (auto it = memo.find(v); it != memo.end()) return it->second;
  long long total = 0;
  bool sink = true;
  for (const auto& e : g.edges) {
    if (e.src != v) continue;
    sink = false;
    if (e.mult.omega) throw std::invalid_argument("count_paths_from: omega edge");
    long long below = count_paths_from(g, e.rng, memo);
    total += static_cast<long long>(e.mult.count) * below;
    if (total > (1ll << 50)) throw SpanBudgetExceeded("path count exceeds budget");
  }
  if (sink) total = 1;
  memo[v] = total;
  return total;
}

inline long long path_space_size(const Graph& g) {
  std::map<std::string, long long> memo;
  long long n = 0;
  for (const auto& v : g.vertices) n += count_paths_from(g, v, memo);
  return n;
}

// Paths ending at the sink w, counted over all starting vertices.
inline long long count_paths_to(const Graph& g, const std::string& w) {
  std::map<std::string, long long> memo;  // v -> #paths v..w
  auto rec = [&](auto&& self, const std::string& v) -> long long {
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    long long total = (v == w) ? 1 : 0;
    if (v != w) {
      for (const auto& e : g.edges) {
        if (e.src != v) continue;
        total += static_cast<long long>(e.mult.count) * self(self, e.rng);
      }
    }
    memo[v] = total;
    return total;
  };
  long long n = 0;
  for (const auto& v : g.vertices) n += rec(rec, v);
  return n;
}

// dim of the path-space family of a finite acyclic graph: one full matrix
// block per sink, of size (#paths into that sink).
inline long long expected_family_dim(const Graph& g) {
  long long dim = 0;
  for (const auto& w : classify_vertices(g).sinks()) {
    long long n = count_paths_to(g, w);
    dim += n * n;
    if (dim > (1ll << 50)) throw SpanBudgetExceeded("family dimension exceeds budget");
  }
  return dim;
}

// --- gauge grading ------------------------------------------------------------

// degree(mu) = |mu|; U_z = diag(z^degree) implements the gauge action.
struct GaugeGrading {
  std::vector<int> degree;

  // U_z M U_z^* == z^k M as a Laurent-polynomial identity in z: each nonzero
  // entry must sit on a diagonal stripe of degree difference k.
  bool homogeneous(const QMat& m, int k) const {
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        if (m.at(r, c) != 0 && degree[r] - degree[c] != k) return false;
    return true;
  }
};

// --- Cuntz-Krieger families ---------------------------------------------------

// An exact matrix Cuntz-Krieger (E,V)-family on a path-space basis.
struct CKRep {
  Graph graph;     // the graph E carrying the family (ordinary, acyclic)
  VertexSet v_set; // V: vertices where the summation relation is imposed
  Graph ev_graph;  // the E_V realization whose path space carries everything
  std::vector<std::string> basis;  // path labels
  GaugeGrading grading;
  std::map<std::string, QMat> p;  // vertex -> projection
  std::map<std::string, QMat> s;  // edge-copy label -> partial isometry

  int dim() const { return static_cast<int>(basis.size()); }

  std::vector<QMat> generators() const {
    std::vector<QMat> gens;
    for (const auto& [v, m] : p) gens.push_back(m);
    for (const auto& [c, m] : s) gens.push_back(m);
    return gens;
  }

  QMat zero() const { return QMat(dim(), dim()); }

  // p_v - sum of s_e s_e* over the copies leaving v.
  QMat defect(const std::string& v) const {
    QMat d = p.at(v);
    for (const auto& [label, m] : s)
      if (source_of.at(label) == v) d = d - m * m.adjoint();
    return d;
  }

  std::map<std::string, std::string> source_of;  // copy label -> source vertex
  std::map<std::string, std::string> range_of;   // copy label -> range vertex
};

inline QMat projection_onto(const PathSpace& ps, const std::string& start_vertex) {
  QMat m(ps.dim(), ps.dim());
  for (int i = 0; i < ps.dim(); ++i)
    if (ps.paths[i].start == start_vertex) m.at(i, i) = 1;
  return m;
}

inline QMat creation_matrix(const PathSpace& ps, int copy_index) {
  QMat m(ps.dim(), ps.dim());
  const EdgeCopy& c = ps.copies[copy_index];
  for (int i = 0; i < ps.dim(); ++i) {
    if (ps.paths[i].start != c.rng) continue;
    Path ext{c.src, {copy_index}};
    ext.copies.insert(ext.copies.end(), ps.paths[i].copies.begin(), ps.paths[i].copies.end());
    m.at(ps.index_by_label.at(ps.label(ext)), i) = 1;
  }
  return m;
}

// The path-space representation: build the Cuntz-Krieger family of E_V on
// the basis of E_V-paths into sinks, then pull the (E,V)-family back along
// p_v = q_v + q_{v'}, s_e = t_e + t_{e'}.
inline CKRep path_space_rep(const Graph& g_in, const VertexSet& v_in,
                            std::optional<std::uint64_t> tail_depth = std::nullopt) {
  require_valid(g_in);
  require_valid_set(g_in, v_in);

  Graph g = g_in;
  VertexSet v_set = v_in;
  if (!g_in.rays.empty()) {
    if (!tail_depth)
      throw std::invalid_argument("path_space_rep: graph has rays; a tail depth is required");
    TruncationResult tr = truncate_tails_ex(g_in, *tail_depth);
    g = tr.graph;
    // vertices that the truncation made regular join V: former sinks with a
    // ray, and all chain vertices except the last
    VertexClass before = classify_vertices(g_in);
    for (const auto& r : g_in.rays) {
      if (before.tag.at(r.attach) == VertexTag::Sink) v_set.add(r.attach);
      const auto& chain = tr.chain_vertices.at(r.id);
      for (size_t i = 0; i + 1 < chain.size(); ++i) v_set.add(chain[i]);
    }
    v_set.rays.clear();
  }

  VertexSet reg = regular_vertices(g);
  if (!v_set.subset_of(reg))
    throw std::invalid_argument("path_space_rep: V must consist of regular vertices");

  RelativeGraphResult rel = build_relative_graph_ex(g, v_set);
  PathSpace ps = enumerate_path_space(rel.graph);

  CKRep rep;
  rep.graph = g;
  rep.v_set = v_set;
  rep.ev_graph = rel.graph;
  for (const auto& p : ps.paths) {
    rep.basis.push_back(ps.label(p));
    rep.grading.degree.push_back(p.length());
  }

  std::map<std::string, int> copy_index;
  for (size_t i = 0; i < ps.copies.size(); ++i)
    copy_index[ps.copies[i].label()] = static_cast<int>(i);

  for (const auto& v : g.vertices) {
    QMat m = projection_onto(ps, v);
    if (auto it = rel.prime_vertex.find(v); it != rel.prime_vertex.end())
      m = m + projection_onto(ps, it->second);
    rep.p.emplace(v, std::move(m));
  }
  for (const auto& c : edge_copies(g)) {
    QMat m = creation_matrix(ps, copy_index.at(c.label()));
    if (auto it = rel.prime_edge.find(c.edge_id); it != rel.prime_edge.end()) {
      EdgeCopy pc{it->second, c.copy, "", ""};
      m = m + creation_matrix(ps, copy_index.at(pc.label()));
    }
    rep.source_of[c.label()] = c.src;
    rep.range_of[c.label()] = c.rng;
    rep.s.emplace(c.label(), std::move(m));
  }
  return rep;
}

// --- relation checking ---------------------------------------------------------

struct RelationCheck {
  std::string relation;
  std::string witness;
  bool pass = true;
};

struct CKReport {
  std::vector<RelationCheck> checks;
  std::vector<std::pair<std::string, Rational>> strict_defects;  // vertex, rank
  bool ok = true;

  void add(const std::string& rel, bool pass, const std::string& witness = "") {
    if (!pass) {
      checks.push_back({rel, witness, false});
      ok = false;
    }
  }
};

// Exact checks of the (E,V)-family conditions: P mutually orthogonal
// projections, s_e^* s_e = p_{r(e)}, s_e s_e^* <= p_{s(e)} with commuting
// range projections, the summation relation exactly on V, and a strictly
// positive defect on R(E) \ V.
inline CKReport verify_ck_relations(const CKRep& rep, const VertexSet& v_set) {
  CKReport out;
  for (const auto& [v, m] : rep.p) {
    out.add("p projection", m.is_projection(), v);
    for (const auto& [w, mw] : rep.p) {
      if (v >= w) continue;
      out.add("p orthogonal", (m * mw).is_zero(), v + "," + w);
    }
  }
  for (const auto& [c, m] : rep.s) {
    out.add("s*s = p_r", m.adjoint() * m == rep.p.at(rep.range_of.at(c)), c);
    QMat range = m * m.adjoint();
    out.add("ss* projection", range.is_projection(), c);
    out.add("ss* <= p_s", rep.p.at(rep.source_of.at(c)) * range == range, c);
  }
  for (const auto& [c1, m1] : rep.s)
    for (const auto& [c2, m2] : rep.s) {
      if (c1 >= c2) continue;
      QMat r1 = m1 * m1.adjoint();
      QMat r2 = m2 * m2.adjoint();
      out.add("ranges commute", r1 * r2 == r2 * r1, c1 + "," + c2);
    }
  VertexSet reg = regular_vertices(rep.graph);
  for (const auto& v : rep.graph.vertices) {
    if (!reg.contains(v)) continue;
    QMat d = rep.defect(v);
    if (v_set.contains(v)) {
      out.add("p_v = sum ss* on V", d.is_zero(), v);
    } else {
      out.add("defect projection", d.is_projection(), v);
      out.add("defect nonzero off V", !d.is_zero(), v);
      out.strict_defects.emplace_back(v, d.trace());
    }
  }
  // gauge grading: projections fixed, partial isometries of degree one,
  // as polynomial identities in the gauge variable
  for (const auto& [v, m] : rep.p)
    out.add("gauge: p fixed", rep.grading.homogeneous(m, 0), v);
  for (const auto& [c, m] : rep.s)
    out.add("gauge: s degree 1", rep.grading.homogeneous(m, 1), c);
  return out;
}

// --- the relative graph algebra theorem at desk scale ---------------------------

struct RelgasReport {
  bool ok = false;
  bool ck_ok = false;          // {q,t} is a Cuntz-Krieger E_V-family
  bool generation_ok = false;  // p = q + q', s = t + t'
  bool spans_equal = false;
  long long dim_family = -1;
  long long dim_ev_family = -1;
  long long dim_expected = -1;
  std::string counterexample;
};

// From a path-space (E,V)-family, rebuild the E_V-family by the explicit
// case formulas, check it satisfies the full Cuntz-Krieger relations, check
// the generation identities in both directions, and compare the spanned
// algebras against the block-dimension count.
inline RelgasReport verify_relgas(const Graph& g, const VertexSet& v_set,
                                  std::optional<int> max_dim = std::nullopt) {
  RelgasReport rep;
  if (g.vertices.empty()) {
    rep.ok = rep.ck_ok = rep.generation_ok = rep.spans_equal = true;
    rep.dim_family = rep.dim_ev_family = rep.dim_expected = 0;
    return rep;
  }
  CKRep ck = path_space_rep(g, v_set);
  RelativeGraphResult rel = build_relative_graph_ex(g, v_set);
  VertexSet primed = set_minus(regular_vertices(g), v_set);

  CKRep evrep;
  evrep.graph = rel.graph;
  evrep.v_set = regular_vertices(rel.graph);
  evrep.ev_graph = rel.graph;
  evrep.basis = ck.basis;
  evrep.grading = ck.grading;

  for (const auto& v : g.vertices) {
    if (primed.contains(v)) {
      QMat sum = ck.zero();
      for (const auto& [c, m] : ck.s)
        if (ck.source_of.at(c) == v) sum = sum + m * m.adjoint();
      evrep.p.emplace(v, sum);                                  // q_v
      evrep.p.emplace(rel.prime_vertex.at(v), ck.p.at(v) - sum);  // q_{v'}
    } else {
      evrep.p.emplace(v, ck.p.at(v));
    }
  }
  for (const auto& c : edge_copies(g)) {
    const QMat& s = ck.s.at(c.label());
    evrep.source_of[c.label()] = c.src;
    evrep.range_of[c.label()] = c.rng;
    evrep.s.emplace(c.label(), s * evrep.p.at(c.rng));  // t_f = s_f q_{r(f)}
    if (auto it = rel.prime_edge.find(c.edge_id); it != rel.prime_edge.end()) {
      EdgeCopy pc{it->second, c.copy, c.src, rel.prime_vertex.at(c.rng)};
      evrep.source_of[pc.label()] = pc.src;
      evrep.range_of[pc.label()] = pc.rng;
      evrep.s.emplace(pc.label(), s * evrep.p.at(pc.rng));  // t_{e'} = s_e q_{r(e)'}
    }
  }

  CKReport ckcheck = verify_ck_relations(evrep, evrep.v_set);
  rep.ck_ok = ckcheck.ok;
  if (!ckcheck.ok && !ckcheck.checks.empty())
    rep.counterexample = ckcheck.checks.front().relation + " @ " + ckcheck.checks.front().witness;

  rep.generation_ok = true;
  for (const auto& v : g.vertices) {
    QMat expect = evrep.p.at(v);
    if (primed.contains(v)) expect = expect + evrep.p.at(rel.prime_vertex.at(v));
    if (ck.p.at(v) != expect) {
      rep.generation_ok = false;
      rep.counterexample = "p_v != q_v + q_v' at " + v;
    }
  }
  for (const auto& c : edge_copies(g)) {
    QMat expect = evrep.s.at(c.label());
    if (auto it = rel.prime_edge.find(c.edge_id); it != rel.prime_edge.end()) {
      EdgeCopy pc{it->second, c.copy, "", ""};
      expect = expect + evrep.s.at(pc.label());
    }
    if (ck.s.at(c.label()) != expect) {
      rep.generation_ok = false;
      rep.counterexample = "s_e != t_e + t_e' at " + c.label();
    }
  }

  SpannedAlgebra a_family = span_closure(ck.generators(), max_dim);
  SpannedAlgebra a_ev = span_closure(evrep.generators(), max_dim);
  rep.dim_family = a_family.dim();
  rep.dim_ev_family = a_ev.dim();
  rep.dim_expected = expected_family_dim(rel.graph);
  rep.spans_equal = a_family.same_span(a_ev);
  if (!rep.spans_equal && rep.counterexample.empty())
    rep.counterexample = "spanned algebras differ";

  rep.ok = rep.ck_ok && rep.generation_ok && rep.spans_equal &&
           rep.dim_family == rep.dim_expected && rep.dim_ev_family == rep.dim_expected;
  if (!rep.ok && rep.counterexample.empty())
    rep.counterexample = "span dimension " + std::to_string(rep.dim_family) + " != expected " +
                         std::to_string(rep.dim_expected);
  return rep;
}

// --- the defect homomorphism T_K -------------------------------------------------

struct TKReport {
  bool ok = false;
  bool coisometric_on_k = true;
  bool multiplicative = true;
  bool zero_iff_v = true;
  std::string witness;
};

// T_K(delta_v) = p_v - sum_{s(e)=v} s_e s_e^* on the non-infinite-emitters;
// multiplicative because the cross terms cancel, zero exactly on V.
inline TKReport defect_and_TK(const CKRep& rep, const VertexSet& k_set) {
  TKReport out;
  // J(X) vertices of an acyclic multiplicity-finite graph: all of them.
  std::map<std::string, QMat> t;
  for (const auto& v : rep.graph.vertices) t.emplace(v, rep.defect(v));

  for (const auto& v : k_set.base)
    if (!t.count(v) || !t.at(v).is_zero()) {
      out.coisometric_on_k = false;
      out.witness = "T(delta_" + v + ") != 0 on K";
    }
  for (const auto& [v, tv] : t) {
    for (const auto& [w, tw] : t) {
      QMat prod = tv * tw;
      QMat expect = (v == w) ? tv : rep.zero();
      if (prod != expect) {
        out.multiplicative = false;
        out.witness = "T(" + v + ")T(" + w + ") != T(" + v + "." + w + ")";
      }
    }
    bool zero = tv.is_zero();
    if (zero != rep.v_set.contains(v)) {
      out.zero_iff_v = false;
      out.witness = "T(delta_" + v + ") zero-iff-V fails";
    }
  }
  out.ok = out.coisometric_on_k && out.multiplicative && out.zero_iff_v;
  return out;
}

// --- extending a representation along the tail ------------------------------------

struct ExtensionReport {
  CKRep rep;  // the extended family on truncate_tails(add_tails(g), depth)
  bool representation_ok = false;  // (i)-(iii) on the spanning elements
  bool restriction_ok = false;     // X+0 / A+0 corners reproduce the input
  bool ck_ok = false;
  std::string witness;
  bool ok() const { return representation_ok && restriction_ok && ck_ok; }
};

// Build (pi~, t~) on H_X + H_1 + ... + H_depth with H_i = pi(ker phi)H_X:
// pi~(a, f)(h, h_i) = (pi(a)h, pi(f_i)h_i) and t~ shifts each tail slot one
// step down, entries beyond the truncation depth dropping to zero.
inline ExtensionReport extend_representation(const CKRep& in, std::uint64_t depth) {
  if (depth == 0) throw std::invalid_argument("extend_representation: depth must be >= 1");
  if (!in.graph.rays.empty())
    throw std::invalid_argument("extend_representation: representation must be of a ray-free graph");

  ExtensionReport out;
  const Graph& g = in.graph;
  Graph tailed = add_tails(g);
  TruncationResult tr = truncate_tails_ex(tailed, depth);
  const Graph& target = tr.graph;

  // H_0 = pi(ker phi)H: the coordinates of the basis paths sitting at sinks
  std::vector<std::string> sinks = classify_vertices(g).sinks();
  std::vector<int> h0;  // indices into in.basis
  std::vector<std::string> h0_vertex;
  {
    // pi(delta_w) is diagonal here; collect its range coordinates
    for (const auto& w : sinks) {
      const QMat& pw = in.p.at(w);
      for (int i = 0; i < in.dim(); ++i)
        if (pw.at(i, i) != 0) {
          h0.push_back(i);
          h0_vertex.push_back(w);
        }
    }
  }
  int n = in.dim();
  int h = static_cast<int>(h0.size());
  int total = n + static_cast<int>(depth) * h;

  CKRep& ext = out.rep;
  ext.graph = target;
  ext.ev_graph = target;
  ext.v_set = in.v_set;
  for (const auto& w : sinks) ext.v_set.add(w);
  for (const auto& r : tailed.rays) {
    const auto& chain = tr.chain_vertices.at(r.id);
    for (size_t i = 0; i + 1 < chain.size(); ++i) ext.v_set.add(chain[i]);
  }

  ext.basis = in.basis;
  ext.grading.degree = in.grading.degree;
  for (std::uint64_t slot = 1; slot <= depth; ++slot)
    for (int k = 0; k < h; ++k) {
      ext.basis.push_back(in.basis[h0[k]] + "@" + std::to_string(slot));
      ext.grading.degree.push_back(in.grading.degree[h0[k]] - static_cast<int>(slot));
    }

  auto slot_index = [&](std::uint64_t slot, int k) {
    return n + static_cast<int>(slot - 1) * h + k;
  };
  auto embed = [&](const QMat& m) {
    QMat big(total, total);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) big.at(r, c) = m.at(r, c);
    return big;
  };

  for (const auto& v : g.vertices) ext.p.emplace(v, embed(in.p.at(v)));
  for (const auto& [c, m] : in.s) {
    ext.s.emplace(c, embed(m));
    ext.source_of[c] = in.source_of.at(c);
    ext.range_of[c] = in.range_of.at(c);
  }
  for (const auto& r : tailed.rays) {
    const std::string& w = r.attach;
    const auto& chain = tr.chain_vertices.at(r.id);
    const auto& chain_e = tr.chain_edges.at(r.id);
    for (std::uint64_t slot = 1; slot <= depth; ++slot) {
      // projection onto pi(delta_w)H_i
      QMat pv(total, total);
      for (int k = 0; k < h; ++k)
        if (h0_vertex[k] == w) pv.at(slot_index(slot, k), slot_index(slot, k)) = 1;
      ext.p.emplace(chain[slot - 1], std::move(pv));

      // t~(0, eps_slot(delta_w)): H_slot -> H_{slot-1} (slot 1 lands in H_X)
      QMat se(total, total);
      for (int k = 0; k < h; ++k) {
        if (h0_vertex[k] != w) continue;
        int from = slot_index(slot, k);
        int to = (slot == 1) ? h0[k] : slot_index(slot - 1, k);
        se.at(to, from) = 1;
      }
      EdgeCopy tc{chain_e[slot - 1], 1, "", ""};
      ext.s.emplace(tc.label(), std::move(se));
      ext.source_of[tc.label()] = (slot == 1) ? w : chain[slot - 2];
      ext.range_of[tc.label()] = chain[slot - 1];
    }
  }

  // representation conditions on the spanning elements of B and Y:
  //   (i)   s_a^* s_b = [a==b] p_{r(a)}
  //   (ii)  p_x s_c = [s(c)==x] s_c
  //   (iii) s_c p_x = [r(c)==x] s_c
  out.representation_ok = true;
  auto fail = [&](const std::string& msg) {
    out.representation_ok = false;
    if (out.witness.empty()) out.witness = msg;
  };
  for (const auto& [a, ma] : ext.s)
    for (const auto& [b, mb] : ext.s) {
      QMat lhs = ma.adjoint() * mb;
      QMat rhs = (a == b) ? ext.p.at(ext.range_of.at(a)) : QMat(total, total);
      if (lhs != rhs) fail("inner product relation fails at " + a + "," + b);
    }
  for (const auto& [x, px] : ext.p)
    for (const auto& [c, sc] : ext.s) {
      QMat left = px * sc;
      QMat right = sc * px;
      QMat lexp = (ext.source_of.at(c) == x) ? sc : QMat(total, total);
      QMat rexp = (ext.range_of.at(c) == x) ? sc : QMat(total, total);
      if (left != lexp) fail("left action relation fails at " + x + "," + c);
      if (right != rexp) fail("right action relation fails at " + x + "," + c);
    }

  // restriction: the A+0 / X+0 corners are the original family
  out.restriction_ok = true;
  for (const auto& v : g.vertices)
    if (ext.p.at(v) != embed(in.p.at(v))) out.restriction_ok = false;
  for (const auto& [c, m] : in.s)
    if (ext.s.at(c) != embed(m)) out.restriction_ok = false;

  out.ck_ok = verify_ck_relations(ext, ext.v_set).ok;
  if (!out.ck_ok && out.witness.empty()) out.witness = "extended family fails CK relations";
  return out;
}

// --- tail relation lemmas in the truncated model ------------------------------------

struct TailLemmaMatrixReport {
  bool im_relations_ok = false;  // tail generators annihilate the original ones
  bool im_perp_ok = false;       // ... and everything they span
  bool final_space_ok = false;   // t(0,f) t(0,g)^* = pi(shifted product)
  long long algebra_dim = -1;
  std::string witness;
  bool ok() const { return im_relations_ok && im_perp_ok && final_space_ok; }
};

inline TailLemmaMatrixReport verify_tail_relation_lemmas(const Graph& g, std::uint64_t depth,
                                                         std::optional<int> max_dim = std::nullopt) {
  require_valid(g);
  if (!g.rays.empty())
    throw std::invalid_argument("verify_tail_relation_lemmas: input must be ray-free");
  if (depth == 0) throw std::invalid_argument("depth must be >= 1");

  TailLemmaMatrixReport out;
  if (g.vertices.empty()) {
    out.im_relations_ok = out.im_perp_ok = out.final_space_ok = true;
    out.algebra_dim = 0;
    return out;
  }
  Graph tailed = add_tails(g);
  TruncationResult tr = truncate_tails_ex(tailed, depth);
  const Graph& trunc = tr.graph;
  CKRep rep = path_space_rep(trunc, regular_vertices(trunc));

  std::vector<std::string> tail_copies;
  std::map<std::string, std::pair<std::string, std::uint64_t>> tail_of;  // copy -> (ray, i)
  for (const auto& r : tailed.rays)
    for (std::uint64_t i = 1; i <= depth; ++i) {
      EdgeCopy tc{tr.chain_edges.at(r.id)[i - 1], 1, "", ""};
      tail_copies.push_back(tc.label());
      tail_of[tc.label()] = {r.id, i};
    }
  std::vector<QMat> original_gens;
  std::vector<std::string> original_vertices = g.vertices;
  for (const auto& v : original_vertices) original_gens.push_back(rep.p.at(v));
  std::vector<std::string> ordinary_copy_labels;
  for (const auto& c : edge_copies(g)) {
    ordinary_copy_labels.push_back(c.label());
    original_gens.push_back(rep.s.at(c.label()));
  }

  out.im_relations_ok = true;
  auto fail1 = [&](const std::string& msg) {
    out.im_relations_ok = false;
    if (out.witness.empty()) out.witness = msg;
  };
  for (const auto& tc : tail_copies) {
    const QMat& st = rep.s.at(tc);
    for (const auto& v : original_vertices)
      if (!(st * rep.p.at(v)).is_zero()) fail1("t(0,f) pi(a,0) != 0 at " + tc + "," + v);
    for (const auto& oc : ordinary_copy_labels) {
      const QMat& so = rep.s.at(oc);
      if (!(st * so).is_zero()) fail1("t(0,f) t(xi,0) != 0 at " + tc + "," + oc);
      if (!(st * so.adjoint()).is_zero()) fail1("t(0,f) t(xi,0)* != 0 at " + tc + "," + oc);
    }
  }

  // everything the original generators span is annihilated by the tail
  SpannedAlgebra core = span_closure(original_gens, max_dim);
  out.algebra_dim = core.dim();
  out.im_perp_ok = true;
  std::vector<SMat> tail_smats;
  for (const auto& tc : tail_copies) tail_smats.push_back(SMat::from_dense(rep.s.at(tc)));
  for (const auto& b : core.sparse_basis())
    for (size_t k = 0; k < tail_smats.size(); ++k)
      if (!mul(tail_smats[k], b).empty()) {
        out.im_perp_ok = false;
        if (out.witness.empty())
          out.witness = "t(0,f) c != 0 for spanned c at " + tail_copies[k];
      }

  // t(0, eps_i(d_w)) t(0, eps_j(d_w'))^* = [i=j][w=w'] pi at the slot below
  out.final_space_ok = true;
  for (const auto& a : tail_copies)
    for (const auto& b : tail_copies) {
      auto [ra, ia] = tail_of.at(a);
      auto [rb, ib] = tail_of.at(b);
      QMat lhs = rep.s.at(a) * rep.s.at(b).adjoint();
      QMat rhs(rep.dim(), rep.dim());
      if (ra == rb && ia == ib) {
        const std::string below =
            (ia == 1) ? tailed.ray_by_id(ra)->attach : tr.chain_vertices.at(ra)[ia - 2];
        rhs = rep.p.at(below);
      }
      if (lhs != rhs) {
        out.final_space_ok = false;
        if (out.witness.empty()) out.witness = "final space identity fails at " + a + "," + b;
      }
    }
  return out;
}

// --- the corner p O_Y p ---------------------------------------------------------------

struct CornerReport {
  bool relations_ok = false;         // the three compressions of the corner projection
  bool corner_equals_core = false;   // p (span of all generators) p = span of original ones
  bool corner_full = false;          // the ideal generated by the corner is everything
  long long full_dim = -1;
  long long corner_dim = -1;
  long long core_dim = -1;
  std::string witness;
  bool ok() const { return relations_ok && corner_equals_core && corner_full; }
};

inline CornerReport verify_corner(const Graph& g, std::uint64_t depth,
                                  std::optional<int> max_dim = std::nullopt) {
  require_valid(g);
  if (!g.rays.empty()) throw std::invalid_argument("verify_corner: input must be ray-free");
  if (depth == 0) throw std::invalid_argument("depth must be >= 1");

  CornerReport out;
  if (g.vertices.empty()) {
    out.relations_ok = out.corner_equals_core = out.corner_full = true;
    out.full_dim = out.corner_dim = out.core_dim = 0;
    return out;
  }
  Graph tailed = add_tails(g);
  TruncationResult tr = truncate_tails_ex(tailed, depth);
  const Graph& trunc = tr.graph;
  CKRep rep = path_space_rep(trunc, regular_vertices(trunc));

  // the finite sum over the original vertices replaces the multiplier
  // projection of the infinite model
  QMat proj(rep.dim(), rep.dim());
  for (const auto& v : g.vertices) proj = proj + rep.p.at(v);

  out.relations_ok = true;
  auto fail = [&](const std::string& msg) {
    out.relations_ok = false;
    if (out.witness.empty()) out.witness = msg;
  };
  std::map<std::string, std::uint64_t> tail_slot;  // tail copy -> i
  for (const auto& r : tailed.rays)
    for (std::uint64_t i = 1; i <= depth; ++i)
      tail_slot[EdgeCopy{tr.chain_edges.at(r.id)[i - 1], 1, "", ""}.label()] = i;

  for (const auto& [c, m] : rep.s) {
    auto it = tail_slot.find(c);
    bool is_tail = it != tail_slot.end();
    QMat left_expected = (!is_tail || it->second == 1) ? m : QMat(rep.dim(), rep.dim());
    if (proj * m != left_expected) fail("p t~ relation fails at " + c);
    QMat right_expected = is_tail ? QMat(rep.dim(), rep.dim()) : m;
    if (m * proj != right_expected) fail("t~ p relation fails at " + c);
  }
  for (const auto& [v, m] : rep.p) {
    bool ordinary = g.has_vertex(v);
    QMat expected = ordinary ? m : QMat(rep.dim(), rep.dim());
    if (proj * m != expected || m * proj != expected) fail("p pi~ relation fails at " + v);
  }

  std::vector<QMat> all_gens = rep.generators();
  SpannedAlgebra whole = span_closure(all_gens, max_dim);
  out.full_dim = whole.dim();

  std::vector<QMat> core_gens;
  for (const auto& v : g.vertices) core_gens.push_back(rep.p.at(v));
  for (const auto& c : edge_copies(g)) core_gens.push_back(rep.s.at(c.label()));
  SpannedAlgebra core = span_closure(core_gens, max_dim);
  out.core_dim = core.dim();

  RrefBasis corner(rep.dim() * rep.dim());
  SMat proj_s = SMat::from_dense(proj);
  for (const auto& b : whole.sparse_basis())
    corner.insert(smat_to_svec(mul(mul(proj_s, b), proj_s)));
  out.corner_dim = corner.dim();
  out.corner_equals_core = corner.same_subspace(core.basis());
  if (!out.corner_equals_core && out.witness.empty())
    out.witness = "compressed span differs from the original-generator span";

  // fullness at this depth: the two-sided ideal generated by the corner
  // inside the whole span is everything
  std::vector<SMat> mult_set;
  for (const auto& gmat : all_gens) {
    mult_set.push_back(SMat::from_dense(gmat));
    mult_set.push_back(SMat::from_dense(gmat.adjoint()));
  }
  RrefBasis ideal(rep.dim() * rep.dim());
  std::vector<SMat> work;
  auto push = [&](const SMat& m) {
    if (ideal.insert(smat_to_svec(m))) work.push_back(m);
  };
  for (const auto& row : corner.rows()) push(svec_to_smat(row, rep.dim(), rep.dim()));
  for (size_t k = 0; k < work.size(); ++k) {
    SMat cur = work[k];
    for (const auto& gm : mult_set) {
      push(mul(gm, cur));
      push(mul(cur, gm));
    }
  }
  out.corner_full = ideal.dim() == whole.dim();
  if (!out.corner_full && out.witness.empty())
    out.witness = "ideal generated by the corner has dimension " + std::to_string(ideal.dim()) +
                  " < " + std::to_string(whole.dim());
  return out;
}

// --- gauge-invariant uniqueness harness ------------------------------------------------

struct HomSpec {
  enum class Kind { Identity, Quotient, Collapse, Explicit };
  Kind kind = Kind::Identity;
  VertexSet h;         // Quotient: saturated hereditary set to kill
  VertexSet collapse_v;  // Collapse: larger V' with V ⊆ V' ⊆ R(E)
  // Explicit: generator images and the target grading
  std::map<std::string, QMat> p_img;
  std::map<std::string, QMat> s_img;
  std::vector<int> target_degree;
  int target_dim = 0;

  static HomSpec identity() { return {}; }
  static HomSpec quotient(VertexSet h_) {
    HomSpec s;
    s.kind = Kind::Quotient;
    s.h = std::move(h_);
    return s;
  }
  static HomSpec collapse(VertexSet v2) {
    HomSpec s;
    s.kind = Kind::Collapse;
    s.collapse_v = std::move(v2);
    return s;
  }
};

struct GiuReport {
  bool hom_ok = false;  // the generator images extend to a *-homomorphism
  bool cond_vertices = false;   // (1) rho(p_v) != 0 for all v
  bool cond_defects = false;    // (2) rho(defect_v) != 0 for v in R(E) \ V
  bool cond_gauge = false;      // (3) gauge equivariance, entrywise in z
  long long kernel_dim = -1;
  long long algebra_dim = -1;
  bool consistent = false;  // conditions hold => kernel zero, and a failed
                            // condition is reported whenever kernel != 0
  std::vector<std::string> failed_vertices;
  std::vector<std::string> failed_defects;
  std::string witness;
  bool conditions_hold() const { return cond_vertices && cond_defects && cond_gauge; }
};

// Evaluate the uniqueness-theorem conditions for a homomorphism given on
// generators, and compute its kernel by exact linear algebra on the pair
// algebra {(x, rho(x))}.
inline GiuReport giu_test(const Graph& g, const VertexSet& v_set, const HomSpec& hom,
                          std::optional<int> max_dim = std::nullopt) {
  GiuReport out;
  if (g.vertices.empty()) {
    out.hom_ok = out.cond_vertices = out.cond_defects = out.cond_gauge = true;
    out.kernel_dim = 0;
    out.algebra_dim = 0;
    out.consistent = true;
    return out;
  }
  CKRep src = path_space_rep(g, v_set);
  int n = src.dim();

  std::map<std::string, QMat> p_img, s_img;
  std::vector<int> tdeg;
  int m = 0;
  switch (hom.kind) {
    case HomSpec::Kind::Identity: {
      p_img = src.p;
      s_img = src.s;
      tdeg = src.grading.degree;
      m = n;
      break;
    }
    case HomSpec::Kind::Quotient: {
      if (!is_hereditary(g, hom.h) || !is_saturated(g, hom.h))
        throw std::invalid_argument("giu_test: quotient set must be hereditary and saturated");
      QuotientResult q = quotient_graph(g, hom.h);
      CKRep tgt = path_space_rep(q.graph, set_minus(v_set, hom.h));
      m = tgt.dim();
      tdeg = tgt.grading.degree;
      for (const auto& v : g.vertices)
        p_img.emplace(v, hom.h.contains(v) ? QMat(m, m) : tgt.p.at(v));
      for (const auto& c : edge_copies(g)) {
        bool killed = hom.h.contains(c.rng);
        s_img.emplace(c.label(), killed ? QMat(m, m) : tgt.s.at(c.label()));
      }
      break;
    }
    case HomSpec::Kind::Collapse: {
      if (!v_set.subset_of(hom.collapse_v))
        throw std::invalid_argument("giu_test: collapse target must impose at least V");
      CKRep tgt = path_space_rep(g, hom.collapse_v);
      m = tgt.dim();
      tdeg = tgt.grading.degree;
      p_img = tgt.p;
      s_img = tgt.s;
      break;
    }
    case HomSpec::Kind::Explicit: {
      p_img = hom.p_img;
      s_img = hom.s_img;
      tdeg = hom.target_degree;
      m = hom.target_dim;
      for (const auto& v : g.vertices)
        if (!p_img.count(v)) throw std::invalid_argument("giu_test: missing image of p_" + v);
      for (const auto& c : edge_copies(g))
        if (!s_img.count(c.label()))
          throw std::invalid_argument("giu_test: missing image of s_" + c.label());
      break;
    }
  }

  // pair algebra: block-diagonal source+target matrices
  int big = n + m;
  auto pair_mat = [&](const QMat& a, const QMat& b) {
    QMat p2(big, big);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) p2.at(r, c) = a.at(r, c);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) p2.at(n + r, n + c) = b.at(r, c);
    return p2;
  };
  std::vector<QMat> pair_gens;
  for (const auto& v : g.vertices) pair_gens.push_back(pair_mat(src.p.at(v), p_img.at(v)));
  for (const auto& c : edge_copies(g))
    pair_gens.push_back(pair_mat(src.s.at(c.label()), s_img.at(c.label())));
  SpannedAlgebra pairs = span_closure(pair_gens, max_dim);

  // indices of source entries come first in the vectorization, so a pivot in
  // the target region means the source part vanishes: the images satisfy a
  // relation the sources do not, and no homomorphism exists.
  const int source_bound = n > 0 ? (n - 1) * big + n : 0;
  out.hom_ok = true;
  for (const auto& row : pairs.basis().canonical_rows())
    if (!row.empty() && row.front().first >= source_bound) {
      out.hom_ok = false;
      out.witness = "generator images are not multiplicative: the pair algebra "
                    "contains (0, y) with y != 0";
      break;
    }
  if (!out.hom_ok) return out;

  // kernel: re-reduce with target coordinates leading; rows pivoted in the
  // source region have zero target part
  RrefBasis flipped((n + m) * (n + m));
  auto remap = [&](int idx) {
    int r = idx / big, c = idx % big;
    bool source = r < n && c < n;
    return source ? m * m + r * n + c : (r - n) * m + (c - n);
  };
  for (const auto& row : pairs.basis().canonical_rows()) {
    SVec v2;
    for (const auto& [i, x] : row) v2.emplace_back(remap(i), x);
    std::sort(v2.begin(), v2.end());
    flipped.insert(std::move(v2));
  }
  out.kernel_dim = 0;
  out.algebra_dim = pairs.dim();
  for (const auto& row : flipped.canonical_rows())
    if (!row.empty() && row.front().first >= m * m) ++out.kernel_dim;

  // condition (1)
  out.cond_vertices = true;
  for (const auto& v : g.vertices)
    if (p_img.at(v).is_zero()) {
      out.cond_vertices = false;
      out.failed_vertices.push_back(v);
    }
  // condition (2): the strict defects must survive
  out.cond_defects = true;
  VertexSet strict = set_minus(regular_vertices(g), v_set);
  for (const auto& v : strict.base) {
    QMat d = p_img.at(v);
    for (const auto& c : edge_copies(g))
      if (c.src == v) d = d - s_img.at(c.label()) * s_img.at(c.label()).adjoint();
    if (d.is_zero()) {
      out.cond_defects = false;
      out.failed_defects.push_back(v);
    }
  }
  // condition (3): gauge equivariance as a polynomial identity on generators
  GaugeGrading tg{tdeg};
  out.cond_gauge = true;
  for (const auto& v : g.vertices)
    if (!tg.homogeneous(p_img.at(v), 0)) out.cond_gauge = false;
  for (const auto& c : edge_copies(g))
    if (!tg.homogeneous(s_img.at(c.label()), 1)) out.cond_gauge = false;

  out.consistent = !(out.conditions_hold() && out.kernel_dim != 0);
  if (!out.consistent)
    out.witness = "conditions hold but kernel is nonzero: uniqueness violated";
  return out;
}

}  // namespace corrtail

