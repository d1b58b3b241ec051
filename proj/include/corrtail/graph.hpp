#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrtail {

// Edge multiplicity: a positive natural number or omega (infinitely many
// parallel edges). Degree arithmetic also uses 0.
struct Mult {
  bool omega = false;
  std::uint64_t count = 0;

  static Mult fin(std::uint64_t n) { return Mult{false, n}; }
  static Mult om() { return Mult{true, 0}; }

  bool is_finite() const { return !omega; }
  bool is_zero() const { return !omega && count == 0; }

  Mult& operator+=(const Mult& o) {
    if (o.omega) omega = true;
    if (!omega) count += o.count;
    return *this;
  }
  friend Mult operator+(Mult a, const Mult& b) { return a += b; }

  bool operator==(const Mult& o) const {
    return omega == o.omega && (omega || count == o.count);
  }
  bool operator!=(const Mult& o) const { return !(*this == o); }

  std::string str() const { return omega ? "omega" : std::to_string(count); }
};

struct Edge {
  std::string id;
  std::string src;
  std::string rng;
  Mult mult = Mult::fin(1);

  bool operator==(const Edge&) const = default;
};

// A tail ray: an infinite chain attach -> r.1 -> r.2 -> ... of fresh
// vertices, each edge simple. Stored symbolically.
struct Ray {
  std::string id;
  std::string attach;

  bool operator==(const Ray&) const = default;
};

struct Graph {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  std::vector<Ray> rays;

  bool has_vertex(const std::string& v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
  }

  const Ray* ray_at(const std::string& v) const {
    for (const auto& r : rays)
      if (r.attach == v) return &r;
    return nullptr;
  }

  const Ray* ray_by_id(const std::string& id) const {
    for (const auto& r : rays)
      if (r.id == id) return &r;
    return nullptr;
  }

  // Vertices and edges sorted by id; the canonical form used for
  // serialization and structural comparison.
  Graph canonical() const {
    Graph g = *this;
    std::sort(g.vertices.begin(), g.vertices.end());
    std::sort(g.edges.begin(), g.edges.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    std::sort(g.rays.begin(), g.rays.end(),
              [](const Ray& a, const Ray& b) { return a.id < b.id; });
    return g;
  }

  bool operator==(const Graph&) const = default;
};

inline bool same_graph(const Graph& a, const Graph& b) {
  return a.canonical() == b.canonical();
}

// A subset of vertices: a set of ordinary vertices plus, per ray, an
// all-or-nothing flag meaning "every vertex of this ray".
struct VertexSet {
  std::vector<std::string> base;  // sorted, unique
  std::vector<std::string> rays;  // ray ids, sorted, unique

  static VertexSet of(std::vector<std::string> vs, std::vector<std::string> rs = {}) {
    VertexSet s;
    s.base = std::move(vs);
    s.rays = std::move(rs);
    s.normalize();
    return s;
  }

  void normalize() {
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    std::sort(rays.begin(), rays.end());
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  }

  bool contains(const std::string& v) const {
    return std::binary_search(base.begin(), base.end(), v);
  }
  bool has_ray(const std::string& ray_id) const {
    return std::binary_search(rays.begin(), rays.end(), ray_id);
  }

  void add(const std::string& v) {
    if (!contains(v)) {
      base.insert(std::upper_bound(base.begin(), base.end(), v), v);
    }
  }
  void add_ray(const std::string& r) {
    if (!has_ray(r)) {
      rays.insert(std::upper_bound(rays.begin(), rays.end(), r), r);
    }
  }

  size_t size() const { return base.size() + rays.size(); }
  bool empty() const { return base.empty() && rays.empty(); }

  bool subset_of(const VertexSet& o) const {
    return std::includes(o.base.begin(), o.base.end(), base.begin(), base.end()) &&
           std::includes(o.rays.begin(), o.rays.end(), rays.begin(), rays.end());
  }

  bool operator==(const VertexSet&) const = default;
};

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet u = a;
  for (const auto& v : b.base) u.add(v);
  for (const auto& r : b.rays) u.add_ray(r);
  return u;
}

inline VertexSet set_intersect(const VertexSet& a, const VertexSet& b) {
  VertexSet u;
  for (const auto& v : a.base)
    if (b.contains(v)) u.base.push_back(v);
  for (const auto& r : a.rays)
    if (b.has_ray(r)) u.rays.push_back(r);
  return u;
}

inline VertexSet set_minus(const VertexSet& a, const VertexSet& b) {
  VertexSet u;
  for (const auto& v : a.base)
    if (!b.contains(v)) u.base.push_back(v);
  for (const auto& r : a.rays)
    if (!b.has_ray(r)) u.rays.push_back(r);
  return u;
}

struct Violation {
  std::string code;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const {
    if (ok()) return "ok";
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) s += "; ";
      s += v.code + ": " + v.detail;
    }
    return s;
  }
};

inline ValidationReport validate_graph(const Graph& g) {
  ValidationReport rep;
  auto add = [&](const std::string& code, const std::string& detail) {
    rep.violations.push_back({code, detail});
  };

  std::set<std::string> vs;
  for (const auto& v : g.vertices) {
    if (!vs.insert(v).second) add("duplicate vertex", v);
  }
  std::set<std::string> eids;
  for (const auto& e : g.edges) {
    if (!eids.insert(e.id).second) add("duplicate edge id", e.id);
    if (!vs.count(e.src)) add("dangling src", e.id + " -> " + e.src);
    if (!vs.count(e.rng)) add("dangling rng", e.id + " -> " + e.rng);
    if (!e.mult.omega && e.mult.count == 0) add("zero multiplicity", e.id);
  }
  std::set<std::string> rids;
  std::set<std::string> attached;
  for (const auto& r : g.rays) {
    if (!rids.insert(r.id).second) add("duplicate ray id", r.id);
    if (!vs.count(r.attach)) add("dangling ray attachment", r.id + " -> " + r.attach);
    if (!attached.insert(r.attach).second) add("duplicate ray attachment", r.attach);
  }
  return rep;
}

inline void require_valid(const Graph& g) {
  auto rep = validate_graph(g);
  if (!rep.ok()) throw std::invalid_argument("invalid graph: " + rep.summary());
}

inline void require_valid_set(const Graph& g, const VertexSet& s) {
  for (const auto& v : s.base)
    if (!g.has_vertex(v))
      throw std::invalid_argument("vertex set references unknown vertex: " + v);
  for (const auto& r : s.rays)
    if (!g.ray_by_id(r))
      throw std::invalid_argument("vertex set references unknown ray: " + r);
}

enum class VertexTag { Sink, Regular, InfiniteEmitter };

inline std::string tag_name(VertexTag t) {
  switch (t) {
    case VertexTag::Sink: return "sink";
    case VertexTag::Regular: return "regular";
    case VertexTag::InfiniteEmitter: return "infinite-emitter";
  }
  return "?";
}

// Classification of the ordinary vertices. Every ray vertex is regular (one
// outgoing edge, one incoming), so rays are not listed.
struct VertexClass {
  std::map<std::string, VertexTag> tag;
  std::map<std::string, bool> is_source;

  std::vector<std::string> with_tag(VertexTag t) const {
    std::vector<std::string> out;
    for (const auto& [v, tg] : tag)
      if (tg == t) out.push_back(v);
    return out;
  }
  std::vector<std::string> sinks() const { return with_tag(VertexTag::Sink); }
  std::vector<std::string> regulars() const { return with_tag(VertexTag::Regular); }
  std::vector<std::string> infinite_emitters() const {
    return with_tag(VertexTag::InfiniteEmitter);
  }
};

// Total out-multiplicity of an ordinary vertex, counting an attached ray as
// one extra edge.
inline Mult out_degree(const Graph& g, const std::string& v) {
  Mult d = Mult::fin(0);
  for (const auto& e : g.edges)
    if (e.src == v) d += e.mult;
  if (g.ray_at(v)) d += Mult::fin(1);
  return d;
}

inline Mult in_degree(const Graph& g, const std::string& v) {
  Mult d = Mult::fin(0);
  for (const auto& e : g.edges)
    if (e.rng == v) d += e.mult;
  return d;
}

inline VertexClass classify_vertices(const Graph& g) {
  require_valid(g);
  VertexClass c;
  for (const auto& v : g.vertices) {
    Mult out = out_degree(g, v);
    if (out.omega)
      c.tag[v] = VertexTag::InfiniteEmitter;
    else if (out.count == 0)
      c.tag[v] = VertexTag::Sink;
    else
      c.tag[v] = VertexTag::Regular;
    c.is_source[v] = in_degree(g, v).is_zero();
  }
  return c;
}

// R(E): vertices emitting a finite, nonzero number of edges.
inline VertexSet regular_vertices(const Graph& g) {
  VertexSet s;
  s.base = classify_vertices(g).regulars();
  return s;
}

inline VertexSet sink_vertices(const Graph& g) {
  VertexSet s;
  s.base = classify_vertices(g).sinks();
  return s;
}

inline VertexSet all_vertices(const Graph& g) {
  VertexSet s;
  s.base = g.vertices;
  for (const auto& r : g.rays) s.rays.push_back(r.id);
  s.normalize();
  return s;
}

// The five rows of the correspondence/graph dictionary, evaluated on g.
struct PropertyTable {
  std::map<std::string, bool> phi_delta_v_compact;  // v emits finitely many edges
  bool phi_into_compacts = false;                   // E row-finite
  bool phi_injective = false;                       // E has no sinks
  bool full = false;                                // E has no sources
  bool essential = true;                            // always
};

inline PropertyTable correspondence_property_table(const Graph& g) {
  VertexClass c = classify_vertices(g);
  PropertyTable t;
  t.phi_into_compacts = true;
  t.phi_injective = true;
  t.full = true;
  for (const auto& v : g.vertices) {
    bool compact = c.tag[v] != VertexTag::InfiniteEmitter;
    t.phi_delta_v_compact[v] = compact;
    if (!compact) t.phi_into_compacts = false;
    if (c.tag[v] == VertexTag::Sink) t.phi_injective = false;
    if (c.is_source[v]) t.full = false;
  }
  t.essential = true;
  return t;
}

// Fresh identifier: `base` if unused, otherwise base_2, base_3, ...
inline std::string fresh_id(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int k = 2;; ++k) {
    std::string cand = base + "_" + std::to_string(k);
    if (!taken.count(cand)) return cand;
  }
}

}  // namespace corrtail
