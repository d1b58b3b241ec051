#pragma once

// Test-side oracles, kept independent of the library's computation paths:
// brute-force path enumeration instead of counting recursions, and inline
// subset predicates instead of the closure machinery.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "corrtail/graph.hpp"

namespace oracles {

using corrtail::Graph;
using corrtail::VertexSet;

// All paths of an ordinary acyclic graph, enumerated breadth-first by
// repeatedly extending with single edge copies. Returns, per sink, the
// number of paths ending there (the length-0 path included).
inline std::map<std::string, long long> paths_into_sinks(const Graph& g) {
  std::set<std::string> sinks;
  for (const auto& v : g.vertices) {
    bool emits = false;
    for (const auto& e : g.edges)
      if (e.src == v) emits = true;
    if (!emits) sinks.insert(v);
  }

  // a path is (start, end); multiplicity handled by cloning extensions
  std::vector<std::pair<std::string, std::string>> frontier;
  std::map<std::string, long long> count;
  for (const auto& v : g.vertices) frontier.push_back({v, v});
  while (!frontier.empty()) {
    std::vector<std::pair<std::string, std::string>> next;
    for (const auto& [start, end] : frontier) {
      if (sinks.count(end)) count[end] += 1;
      for (const auto& e : g.edges) {
        if (e.src != end) continue;
        for (std::uint64_t k = 0; k < e.mult.count; ++k) next.push_back({start, e.rng});
      }
    }
    frontier = std::move(next);
  }
  return count;
}

inline long long total_paths(const Graph& g) {
  long long n = 0;
  for (const auto& [w, c] : paths_into_sinks(g)) n += c;
  return n;
}

inline long long block_dimension(const Graph& g) {
  long long dim = 0;
  for (const auto& [w, c] : paths_into_sinks(g)) dim += c * c;
  return dim;
}

// Exhaustive saturated-hereditary filter with predicates written out
// directly (ordinary ray-free graphs only).
inline std::vector<std::vector<std::string>> sat_her_subsets(const Graph& g) {
  size_t n = g.vertices.size();
  std::vector<std::vector<std::string>> found;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    std::set<std::string> h;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) h.insert(g.vertices[i]);

    bool hereditary = true;
    for (const auto& e : g.edges)
      if (h.count(e.src) && !h.count(e.rng)) hereditary = false;

    bool saturated = true;
    for (const auto& v : g.vertices) {
      if (h.count(v)) continue;
      std::uint64_t out = 0;
      bool omega = false, all_in = true;
      for (const auto& e : g.edges) {
        if (e.src != v) continue;
        if (e.mult.omega) omega = true;
        out += e.mult.count;
        if (!h.count(e.rng)) all_in = false;
      }
      bool regular = !omega && out > 0;
      if (regular && all_in) saturated = false;
    }

    if (hereditary && saturated) {
      std::vector<std::string> sorted(h.begin(), h.end());
      found.push_back(sorted);
    }
  }
  return found;
}

}  // namespace oracles
