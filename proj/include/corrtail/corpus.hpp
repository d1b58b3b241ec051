#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corrtail/graph.hpp"

namespace corrtail {

// --- bundled fixtures ---------------------------------------------------------

// u -> v, u -> w, v -> w: one sink, one source.
inline Graph fixture_e1() {
  Graph g;
  g.vertices = {"u", "v", "w"};
  g.edges = {{"e", "u", "v", Mult::fin(1)},
             {"f", "u", "w", Mult::fin(1)},
             {"g", "v", "w", Mult::fin(1)}};
  return g;
}

// v -> w: the smallest graph with a sink.
inline Graph fixture_e2() {
  Graph g;
  g.vertices = {"v", "w"};
  g.edges = {{"e", "v", "w", Mult::fin(1)}};
  return g;
}

// v -> w1 with omega multiplicity, v -> w2: an infinite emitter.
inline Graph fixture_e3() {
  Graph g;
  g.vertices = {"v", "w1", "w2"};
  g.edges = {{"a", "v", "w1", Mult::om()}, {"b", "v", "w2", Mult::fin(1)}};
  return g;
}

// single vertex with a loop: no sinks, no sources, but a cycle.
inline Graph fixture_c5() {
  Graph g;
  g.vertices = {"v"};
  g.edges = {{"l", "v", "v", Mult::fin(1)}};
  return g;
}

// one isolated vertex.
inline Graph fixture_z() {
  Graph g;
  g.vertices = {"z"};
  return g;
}

inline std::vector<std::pair<std::string, Graph>> fixtures() {
  return {{"E1", fixture_e1()},
          {"E2", fixture_e2()},
          {"E3", fixture_e3()},
          {"C5", fixture_c5()},
          {"z", fixture_z()}};
}

// --- exhaustive corpus ----------------------------------------------------------

// All multiplicity assignments over the full ordered-pair set for small n;
// for n = 4 all acyclic (upper-triangular) assignments. Omega variants use
// the choice set {0, 1, omega} and keep at least one omega edge to avoid
// duplicating the finite enumeration. Every property the suite checks is
// invariant under graph isomorphism, so only one representative per
// relabeling class is kept.
inline std::vector<std::vector<int>> permutations_of(int n) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::vector<std::vector<int>> out;
  do out.push_back(idx);
  while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

inline std::vector<std::pair<std::string, Graph>> exhaustive_graphs(int max_n,
                                                                    std::uint64_t max_mult,
                                                                    bool with_omega) {
  std::vector<std::pair<std::string, Graph>> out;

  auto make_graph = [](int n, const std::vector<std::pair<int, int>>& pairs,
                       const std::vector<Mult>& assign) {
    Graph g;
    for (int i = 1; i <= n; ++i) g.vertices.push_back("v" + std::to_string(i));
    for (size_t k = 0; k < pairs.size(); ++k) {
      if (assign[k].is_zero()) continue;
      auto [i, j] = pairs[k];
      g.edges.push_back({"e" + std::to_string(i) + "_" + std::to_string(j),
                         "v" + std::to_string(i), "v" + std::to_string(j), assign[k]});
    }
    return g;
  };

  auto enumerate = [&](int n, const std::vector<std::pair<int, int>>& pairs,
                       const std::vector<Mult>& choices, bool require_omega,
                       const std::string& tag) {
    auto perms = permutations_of(n);
    std::set<std::vector<std::int64_t>> seen;
    auto mult_code = [](const Mult& m) -> std::int64_t {
      return m.omega ? -1 : static_cast<std::int64_t>(m.count);
    };
    // canonical key: the lexicographically smallest row-major multiplicity
    // matrix over all vertex relabelings
    auto canonical_key = [&](const std::vector<std::vector<Mult>>& adj) {
      std::vector<std::int64_t> best;
      for (const auto& perm : perms) {
        std::vector<std::int64_t> key;
        key.reserve(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) key.push_back(mult_code(adj[perm[i]][perm[j]]));
        if (best.empty() || key < best) best = std::move(key);
      }
      return best;
    };

    std::vector<size_t> idx(pairs.size(), 0);
    std::uint64_t counter = 0;
    while (true) {
      std::vector<Mult> assign;
      bool has_om = false;
      for (size_t k = 0; k < pairs.size(); ++k) {
        assign.push_back(choices[idx[k]]);
        if (choices[idx[k]].omega) has_om = true;
      }
      if (!require_omega || has_om) {
        std::vector<std::vector<Mult>> adj(n, std::vector<Mult>(n, Mult::fin(0)));
        for (size_t k = 0; k < pairs.size(); ++k)
          adj[pairs[k].first - 1][pairs[k].second - 1] = assign[k];
        if (seen.insert(canonical_key(adj)).second)
          out.push_back(
              {"exh:" + tag + ":" + std::to_string(counter), make_graph(n, pairs, assign)});
      }
      ++counter;
      size_t k = 0;
      while (k < idx.size() && ++idx[k] == choices.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  };

  std::vector<Mult> finite_choices;
  for (std::uint64_t m = 0; m <= max_mult; ++m) finite_choices.push_back(Mult::fin(m));
  std::vector<Mult> omega_choices = {Mult::fin(0), Mult::fin(1), Mult::om()};

  for (int n = 1; n <= max_n; ++n) {
    std::vector<std::pair<int, int>> pairs;
    if (n <= 3) {
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) pairs.emplace_back(i, j);
    } else {
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);  // acyclic only
    }
    std::string tag = "n" + std::to_string(n);
    if (n <= 2) {
      std::vector<Mult> choices = finite_choices;
      if (with_omega) choices.push_back(Mult::om());
      enumerate(n, pairs, choices, false, tag);
    } else {
      enumerate(n, pairs, finite_choices, false, tag);
      if (with_omega) enumerate(n, pairs, omega_choices, true, tag + "w");
    }
  }
  return out;
}

// --- seeded random corpus ---------------------------------------------------------

// Deterministic across platforms: raw 64-bit draws from a splitmix stream,
// thresholded explicitly rather than through distribution objects.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // true with probability num/den
  bool chance(std::uint64_t num, std::uint64_t den) { return next() % den < num; }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Vertex count 2..8, edge probability 0.3 per ordered pair of distinct
// vertices, multiplicity 1 or 2 with omega at 5%.
inline std::vector<std::pair<std::string, Graph>> random_graphs(int count, int max_n,
                                                                std::uint64_t seed,
                                                                bool with_omega = true) {
  std::vector<std::pair<std::string, Graph>> out;
  DetRng rng(seed);
  for (int k = 0; k < count; ++k) {
    int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n - 1)));
    Graph g;
    for (int i = 1; i <= n; ++i) g.vertices.push_back("v" + std::to_string(i));
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        if (!rng.chance(3, 10)) continue;
        Mult m = Mult::fin(1 + rng.below(2));
        if (with_omega && rng.chance(1, 20)) m = Mult::om();
        g.edges.push_back({"e" + std::to_string(i) + "_" + std::to_string(j),
                           "v" + std::to_string(i), "v" + std::to_string(j), m});
      }
    out.push_back({"rand:" + std::to_string(k), g});
  }
  return out;
}

}  // namespace corrtail
