#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrtail/graph.hpp"
#include "corrtail/transforms.hpp"

namespace corrtail {

// The poset of saturated hereditary vertex sets under inclusion.
// Meet is intersection; join is the saturation closure of the hereditary
// closure of the union.
struct IdealLattice {
  Graph graph;
  VertexClass cls;  // classification of `graph`, shared by the lattice ops
  std::vector<VertexSet> elements;  // sorted by (size, lexicographic)

  int index_of(const VertexSet& s) const {
    for (size_t i = 0; i < elements.size(); ++i)
      if (elements[i] == s) return static_cast<int>(i);
    return -1;
  }

  bool leq(int a, int b) const { return elements[a].subset_of(elements[b]); }

  int meet(int a, int b) const { return index_of(set_intersect(elements[a], elements[b])); }

  int join(int a, int b) const {
    return index_of(saturation_closure(
        graph, hereditary_closure(graph, set_union(elements[a], elements[b])), cls));
  }
};

inline void sort_elements(std::vector<VertexSet>& els) {
  std::sort(els.begin(), els.end(), [](const VertexSet& a, const VertexSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    if (a.base != b.base) return a.base < b.base;
    return a.rays < b.rays;
  });
}

// Exhaustive enumeration over subsets of the ordinary vertices and ray
// flags. Heredity forces the flag of a ray whose attachment is included;
// the remaining flags are free and enumerated as well. (When every ray sits
// at a former sink, as after add_tails, the flag is determined by the base:
// the attachment's only edge points into the ray.)
inline IdealLattice enumerate_saturated_hereditary(const Graph& g) {
  require_valid(g);
  size_t n = g.vertices.size();
  if (n + g.rays.size() > 16)
    throw std::invalid_argument("enumerate_saturated_hereditary: more than 16 vertices");

  IdealLattice lat;
  lat.graph = g;
  lat.cls = classify_vertices(g);
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    VertexSet s;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) s.base.push_back(g.vertices[i]);
    s.normalize();
    std::vector<std::string> free_rays;
    for (const auto& r : g.rays) {
      if (s.contains(r.attach))
        s.add_ray(r.id);  // forced by heredity
      else
        free_rays.push_back(r.id);
    }
    for (std::uint64_t fmask = 0; fmask < (1ull << free_rays.size()); ++fmask) {
      VertexSet cand = s;
      for (size_t i = 0; i < free_rays.size(); ++i)
        if (fmask & (1ull << i)) cand.add_ray(free_rays[i]);
      if (is_hereditary(g, cand) && is_saturated(g, cand, lat.cls)) lat.elements.push_back(cand);
    }
  }
  sort_elements(lat.elements);
  return lat;
}

// The lattice map induced by adding tails: H maps to H together with the
// rays attached at the sinks it contains.
inline VertexSet tails_image(const Graph& g, const Graph& tailed, const VertexSet& h) {
  VertexSet out = h;
  for (const auto& r : tailed.rays)
    if (!g.ray_by_id(r.id) && h.contains(r.attach)) out.add_ray(r.id);
  return out;
}

struct LatticeIso {
  IdealLattice src;
  IdealLattice dst;
  std::vector<std::pair<int, int>> pairs;  // index in src -> index in dst
  bool ok = false;
  std::string counterexample;
};

// Verify that H -> H ∪ {rays at sinks in H} is an order isomorphism from
// the lattice of g onto the lattice of add_tails(g).
inline LatticeIso tails_lattice_map(const Graph& g) {
  require_valid(g);
  if (!g.rays.empty())
    throw std::invalid_argument("tails_lattice_map: input must be ray-free");

  LatticeIso iso;
  Graph tailed = add_tails(g);
  iso.src = enumerate_saturated_hereditary(g);
  iso.dst = enumerate_saturated_hereditary(tailed);

  if (iso.src.elements.size() != iso.dst.elements.size()) {
    iso.counterexample = "lattice sizes differ: " + std::to_string(iso.src.elements.size()) +
                         " vs " + std::to_string(iso.dst.elements.size());
    return iso;
  }
  std::vector<bool> hit(iso.dst.elements.size(), false);
  for (size_t i = 0; i < iso.src.elements.size(); ++i) {
    VertexSet img = tails_image(g, tailed, iso.src.elements[i]);
    int j = iso.dst.index_of(img);
    if (j < 0) {
      iso.counterexample = "image of element " + std::to_string(i) + " is not saturated hereditary";
      return iso;
    }
    if (hit[j]) {
      iso.counterexample = "map is not injective at element " + std::to_string(i);
      return iso;
    }
    hit[j] = true;
    iso.pairs.emplace_back(static_cast<int>(i), j);
  }
  // order preserved both ways
  for (const auto& [i1, j1] : iso.pairs)
    for (const auto& [i2, j2] : iso.pairs) {
      bool s = iso.src.leq(i1, i2);
      bool d = iso.dst.leq(j1, j2);
      if (s != d) {
        iso.counterexample = "order mismatch between elements " + std::to_string(i1) + " and " +
                             std::to_string(i2);
        return iso;
      }
    }
  iso.ok = true;
  return iso;
}

struct LatticeReport {
  size_t count = 0;
  std::vector<VertexSet> elements;
  std::vector<std::pair<int, int>> hasse_edges;      // covering pairs a < b
  std::vector<std::vector<int>> meet_table;          // empty when omitted
  std::vector<std::vector<int>> join_table;
  bool tables_included = false;
  bool hasse_included = false;
  std::string note;
};

inline LatticeReport lattice_report(const IdealLattice& lat) {
  LatticeReport rep;
  rep.count = lat.elements.size();
  rep.elements = lat.elements;
  int m = static_cast<int>(lat.elements.size());

  if (m <= 1024) {
    rep.hasse_included = true;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (a == b || !lat.leq(a, b)) continue;
        bool covering = true;
        for (int c = 0; c < m && covering; ++c)
          if (c != a && c != b && lat.leq(a, c) && lat.leq(c, b)) covering = false;
        if (covering) rep.hasse_edges.emplace_back(a, b);
      }
  }
  if (m <= 128) {
    rep.tables_included = true;
    rep.meet_table.assign(m, std::vector<int>(m, -1));
    rep.join_table.assign(m, std::vector<int>(m, -1));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        rep.meet_table[a][b] = lat.meet(a, b);
        rep.join_table[a][b] = lat.join(a, b);
      }
  }
  if (has_omega_edge(lat.graph))
    rep.note =
        "graph is not row-finite: only the saturated hereditary layer of the "
        "gauge-invariant ideal lattice is tracked";
  return rep;
}

}  // namespace corrtail
