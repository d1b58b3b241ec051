#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrtail/graph.hpp"

namespace corrtail {

// Attach a fresh ray at every sink. The result has no sinks; applying it
// twice gives the same graph.
inline Graph add_tails(const Graph& g) {
  require_valid(g);
  Graph out = g;
  std::set<std::string> ray_ids;
  for (const auto& r : g.rays) ray_ids.insert(r.id);
  for (const auto& v : classify_vertices(g).sinks()) {
    std::string id = fresh_id("tail_" + v, ray_ids);
    ray_ids.insert(id);
    out.rays.push_back({id, v});
  }
  return out;
}

// Name of the depth-i vertex of ray r once the ray is truncated.
inline std::string ray_vertex_name(const std::string& ray_id, std::uint64_t depth) {
  return ray_id + "." + std::to_string(depth);
}

inline std::string ray_edge_name(const std::string& ray_id, std::uint64_t depth) {
  return ray_id + ".e" + std::to_string(depth);
}

// Replace each ray by an ordinary chain of `depth` fresh vertices; the last
// chain vertex becomes a sink. Ray-free graphs pass through unchanged.
struct TruncationResult {
  Graph graph;
  std::map<std::string, std::vector<std::string>> chain_vertices;  // ray id -> depth-indexed
  std::map<std::string, std::vector<std::string>> chain_edges;
};

inline TruncationResult truncate_tails_ex(const Graph& g, std::uint64_t depth) {
  require_valid(g);
  if (depth == 0) throw std::invalid_argument("truncate_tails: depth must be >= 1");

  TruncationResult out;
  out.graph = g;
  if (g.rays.empty()) return out;
  out.graph.rays.clear();
  std::set<std::string> vids(g.vertices.begin(), g.vertices.end());
  std::set<std::string> eids;
  for (const auto& e : g.edges) eids.insert(e.id);

  for (const auto& r : g.rays) {
    std::string prev = r.attach;
    for (std::uint64_t i = 1; i <= depth; ++i) {
      std::string v = fresh_id(ray_vertex_name(r.id, i), vids);
      vids.insert(v);
      out.graph.vertices.push_back(v);
      out.chain_vertices[r.id].push_back(v);
      std::string e = fresh_id(ray_edge_name(r.id, i), eids);
      eids.insert(e);
      out.graph.edges.push_back({e, prev, v, Mult::fin(1)});
      out.chain_edges[r.id].push_back(e);
      prev = v;
    }
  }
  return out;
}

inline Graph truncate_tails(const Graph& g, std::uint64_t depth) {
  return truncate_tails_ex(g, depth).graph;
}

// The graph E_V: one new sink v' per regular vertex outside V, plus a copy
// e' of every edge whose range is such a vertex.
struct RelativeGraphResult {
  Graph graph;
  std::map<std::string, std::string> prime_vertex;  // v -> v' for v in R(E) \ V
  std::map<std::string, std::string> prime_edge;    // e -> e' for r(e) in R(E) \ V
};

inline RelativeGraphResult build_relative_graph_ex(const Graph& g, const VertexSet& v_set) {
  require_valid(g);
  require_valid_set(g, v_set);
  if (!g.rays.empty())
    throw std::invalid_argument("build_relative_graph: input must be ray-free");
  VertexSet reg = regular_vertices(g);
  if (!v_set.subset_of(reg))
    throw std::invalid_argument("build_relative_graph: V must consist of regular vertices");

  VertexSet primed = set_minus(reg, v_set);  // R(E) \ V
  RelativeGraphResult out;
  out.graph = g;
  std::set<std::string> vids(g.vertices.begin(), g.vertices.end());
  std::set<std::string> eids;
  for (const auto& e : g.edges) eids.insert(e.id);

  for (const auto& v : primed.base) {
    std::string pv = fresh_id(v + "'", vids);
    vids.insert(pv);
    out.prime_vertex[v] = pv;
    out.graph.vertices.push_back(pv);
  }
  for (const auto& e : g.edges) {
    if (!primed.contains(e.rng)) continue;
    std::string pe = fresh_id(e.id + "'", eids);
    eids.insert(pe);
    out.prime_edge[e.id] = pe;
    out.graph.edges.push_back({pe, e.src, out.prime_vertex[e.rng], e.mult});
  }
  return out;
}

inline Graph build_relative_graph(const Graph& g, const VertexSet& v_set) {
  return build_relative_graph_ex(g, v_set).graph;
}

// --- hereditary / saturated machinery -------------------------------------

// Direct predicate: closed under following edges src -> rng. A ray counts
// as an edge from its attachment into the ray, and ray membership is
// all-or-nothing.
inline bool is_hereditary(const Graph& g, const VertexSet& s) {
  for (const auto& e : g.edges)
    if (s.contains(e.src) && !s.contains(e.rng)) return false;
  for (const auto& r : g.rays)
    if (s.contains(r.attach) && !s.has_ray(r.id)) return false;
  return true;
}

// Direct predicate: every regular vertex all of whose targets lie in s is
// in s. A vertex with an attached ray has the first ray vertex among its
// targets, so it can only be forced when the ray is flagged. The overload
// taking a precomputed classification serves enumeration loops.
inline bool is_saturated(const Graph& g, const VertexSet& s, const VertexClass& c) {
  for (const auto& v : g.vertices) {
    if (c.tag.at(v) != VertexTag::Regular || s.contains(v)) continue;
    bool all_in = true;
    for (const auto& e : g.edges)
      if (e.src == v && !s.contains(e.rng)) { all_in = false; break; }
    if (all_in && g.ray_at(v) && !s.has_ray(g.ray_at(v)->id)) all_in = false;
    if (all_in) return false;
  }
  return true;
}

inline bool is_saturated(const Graph& g, const VertexSet& s) {
  return is_saturated(g, s, classify_vertices(g));
}

inline bool is_saturated_hereditary(const Graph& g, const VertexSet& s) {
  return is_hereditary(g, s) && is_saturated(g, s);
}

namespace detail {
inline VertexSet hereditary_fixpoint(const Graph& g, VertexSet s) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : g.edges)
      if (s.contains(e.src) && !s.contains(e.rng)) {
        s.add(e.rng);
        changed = true;
      }
    for (const auto& r : g.rays)
      if (s.contains(r.attach) && !s.has_ray(r.id)) {
        s.add_ray(r.id);
        changed = true;
      }
  }
  return s;
}
}  // namespace detail

// Smallest hereditary superset, by fixed-point iteration.
inline VertexSet hereditary_closure(const Graph& g, VertexSet s) {
  require_valid_set(g, s);
  return detail::hereditary_fixpoint(g, std::move(s));
}

// Smallest saturated superset of an already-hereditary set; adding a forced
// vertex keeps the set hereditary, so the joint fixed point is reached by
// alternating both rules.
inline VertexSet saturation_closure(const Graph& g, VertexSet s, const VertexClass& c) {
  require_valid_set(g, s);
  bool changed = true;
  while (changed) {
    changed = false;
    s = detail::hereditary_fixpoint(g, std::move(s));
    for (const auto& v : g.vertices) {
      if (c.tag.at(v) != VertexTag::Regular || s.contains(v)) continue;
      bool all_in = true;
      for (const auto& e : g.edges)
        if (e.src == v && !s.contains(e.rng)) { all_in = false; break; }
      if (all_in && g.ray_at(v) && !s.has_ray(g.ray_at(v)->id)) all_in = false;
      if (all_in) {
        s.add(v);
        changed = true;
      }
    }
  }
  return s;
}

inline VertexSet saturation_closure(const Graph& g, VertexSet s) {
  require_valid(g);
  return saturation_closure(g, std::move(s), classify_vertices(g));
}

// --- quotients -------------------------------------------------------------

struct QuotientResult {
  Graph graph;             // F with F^0 = E^0 \ H, F^1 = { e : r(e) not in H }
  VertexSet b_h;           // infinite emitters made finite by deleting edges into H
  VertexSet relative_set;  // R(F) \ B_H
};

inline QuotientResult quotient_graph(const Graph& g, const VertexSet& h) {
  require_valid(g);
  require_valid_set(g, h);
  if (!is_hereditary(g, h) || !is_saturated(g, h))
    throw std::invalid_argument("quotient_graph: H must be hereditary and saturated");

  QuotientResult out;
  for (const auto& v : g.vertices)
    if (!h.contains(v)) out.graph.vertices.push_back(v);
  for (const auto& e : g.edges)
    if (!h.contains(e.rng)) out.graph.edges.push_back(e);
  for (const auto& r : g.rays)
    if (!h.has_ray(r.id)) out.graph.rays.push_back(r);

  VertexClass c = classify_vertices(g);
  for (const auto& v : g.vertices) {
    if (h.contains(v) || c.tag.at(v) != VertexTag::InfiniteEmitter) continue;
    Mult rest = Mult::fin(0);
    for (const auto& e : g.edges)
      if (e.src == v && !h.contains(e.rng)) rest += e.mult;
    // an unflagged ray at v stays and contributes one edge
    if (g.ray_at(v) && !h.has_ray(g.ray_at(v)->id)) rest += Mult::fin(1);
    if (rest.is_finite() && rest.count > 0) out.b_h.add(v);
  }
  out.relative_set = set_minus(regular_vertices(out.graph), out.b_h);
  return out;
}

// --- subgraphs --------------------------------------------------------------

inline bool is_subgraph(const Graph& g, const Graph& f) {
  for (const auto& v : f.vertices)
    if (!g.has_vertex(v)) return false;
  for (const auto& e : f.edges) {
    bool found = false;
    for (const auto& ge : g.edges)
      if (ge.id == e.id && ge.src == e.src && ge.rng == e.rng) {
        // a subgraph may take fewer parallel copies
        bool mult_ok = ge.mult.omega ? true : (!e.mult.omega && e.mult.count <= ge.mult.count);
        found = mult_ok;
        break;
      }
    if (!found) return false;
  }
  for (const auto& r : f.rays) {
    const Ray* gr = g.ray_by_id(r.id);
    if (!gr || gr->attach != r.attach) return false;
  }
  return true;
}

// V := { v in R(F) : every g-edge out of v is an f-edge }, the set over
// which the subgraph generates a relative family.
inline VertexSet subgraph_relative_set(const Graph& g, const Graph& f) {
  require_valid(g);
  require_valid(f);
  if (!is_subgraph(g, f))
    throw std::invalid_argument("subgraph_relative_set: f is not a subgraph of g");

  VertexSet out;
  VertexClass cf = classify_vertices(f);
  for (const auto& v : f.vertices) {
    if (cf.tag.at(v) != VertexTag::Regular) continue;
    bool same_out = true;
    for (const auto& ge : g.edges) {
      if (ge.src != v) continue;
      bool in_f = false;
      for (const auto& fe : f.edges)
        if (fe.id == ge.id && fe.mult == ge.mult) { in_f = true; break; }
      if (!in_f) { same_out = false; break; }
    }
    if (same_out && g.ray_at(v) && !f.ray_at(v)) same_out = false;
    if (same_out) out.add(v);
  }
  for (const auto& r : f.rays)
    if (g.ray_by_id(r.id)) out.add_ray(r.id);
  return out;
}

// --- misc helpers -----------------------------------------------------------

inline bool has_cycle(const Graph& g) {
  // rays never close a cycle
  std::map<std::string, int> state;  // 0 unseen, 1 active, 2 done
  std::vector<std::pair<std::string, size_t>> stack;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : g.edges) adj[e.src].push_back(e.rng);
  for (const auto& start : g.vertices) {
    if (state[start]) continue;
    stack.push_back({start, 0});
    state[start] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      auto& next = adj[v];
      if (i < next.size()) {
        const std::string& w = next[i++];
        if (state[w] == 1) return true;
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

inline bool has_omega_edge(const Graph& g) {
  for (const auto& e : g.edges)
    if (e.mult.omega) return true;
  return false;
}

}  // namespace corrtail
