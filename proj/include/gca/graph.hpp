#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gca/common.hpp"

namespace gca {

// Vertex sets are bitmasks over the graph's lexicographic vertex order.
// Lattice enumeration and everything downstream is desk-scale, so 64
// vertices is a hard ceiling (the default enumeration bound is far lower).
using VSet = std::uint64_t;

inline constexpr int kMaxVertices = 64;

inline int vset_size(VSet s) {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_popcountll(s);
#else
  int n = 0;
  while (s) {
    n += int(s & 1);
    s >>= 1;
  }
  return n;
#endif
}

inline bool vset_contains(VSet s, int v) { return (s >> v) & 1u; }
inline VSet vset_single(int v) { return VSet(1) << v; }

struct GraphDescription {
  std::vector<std::string> vertices;
  // (edge id, source id, range id)
  std::vector<std::array<std::string, 3>> edges;
};

/// Finite directed multigraph. Vertices and edges are referred to by
/// index into the lexicographically sorted identifier lists; parallel
/// edges and loops are allowed.
class Graph {
 public:
  static Graph validate(const GraphDescription& desc) {
    Graph g;
    g.vertex_ids_ = desc.vertices;
    std::sort(g.vertex_ids_.begin(), g.vertex_ids_.end());
    for (std::size_t i = 1; i < g.vertex_ids_.size(); ++i)
      require(g.vertex_ids_[i] != g.vertex_ids_[i - 1], ErrorKind::DuplicateId,
              "duplicate vertex id: " + g.vertex_ids_[i]);
    require(g.vertex_ids_.size() <= kMaxVertices, ErrorKind::TooLarge,
            "at most 64 vertices supported");

    std::vector<std::array<std::string, 3>> edges = desc.edges;
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    for (std::size_t i = 1; i < edges.size(); ++i)
      require(edges[i][0] != edges[i - 1][0], ErrorKind::DuplicateId,
              "duplicate edge id: " + edges[i][0]);
    for (const auto& e : edges) {
      int s = g.find_vertex(e[1]);
      int r = g.find_vertex(e[2]);
      require(s >= 0, ErrorKind::UnknownVertex,
              "edge " + e[0] + " references unknown vertex " + e[1]);
      require(r >= 0, ErrorKind::UnknownVertex,
              "edge " + e[0] + " references unknown vertex " + e[2]);
      g.edge_ids_.push_back(e[0]);
      g.src_.push_back(s);
      g.rng_.push_back(r);
    }

    g.incoming_.assign(g.vertex_count(), {});
    g.outgoing_.assign(g.vertex_count(), {});
    for (int e = 0; e < g.edge_count(); ++e) {
      g.incoming_[g.rng_[e]].push_back(e);
      g.outgoing_[g.src_[e]].push_back(e);
    }
    return g;
  }

  int vertex_count() const { return int(vertex_ids_.size()); }
  int edge_count() const { return int(edge_ids_.size()); }
  const std::string& vertex_id(int v) const { return vertex_ids_[v]; }
  const std::string& edge_id(int e) const { return edge_ids_[e]; }
  int src(int e) const { return src_[e]; }
  int rng(int e) const { return rng_[e]; }

  int find_vertex(const std::string& id) const {
    auto it = std::lower_bound(vertex_ids_.begin(), vertex_ids_.end(), id);
    if (it == vertex_ids_.end() || *it != id) return -1;
    return int(it - vertex_ids_.begin());
  }

  /// E^v = r^{-1}(v), in lexicographic edge order.
  const std::vector<int>& incoming(int v) const { return incoming_[v]; }
  const std::vector<int>& outgoing(int v) const { return outgoing_[v]; }

  VSet all_vertices() const {
    if (vertex_count() == 0) return 0;
    return vertex_count() == 64 ? ~VSet(0)
                                : ((VSet(1) << vertex_count()) - 1);
  }

  /// V_reg = {v : r^{-1}(v) nonempty}; finiteness is automatic here.
  VSet regular_vertices() const {
    VSet out = 0;
    for (int v = 0; v < vertex_count(); ++v)
      if (!incoming_[v].empty()) out |= vset_single(v);
    return out;
  }

  bool is_regular(int v) const { return !incoming_[v].empty(); }

  /// True iff a directed path (possibly empty) leads from w to v.
  bool reaches(int w, int v) const {
    if (w == v) return true;
    std::vector<char> seen(vertex_count(), 0);
    std::vector<int> stack{w};
    seen[w] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int e : outgoing_[x]) {
        int y = rng_[e];
        if (y == v) return true;
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    return false;
  }

 private:
  std::vector<std::string> vertex_ids_;
  std::vector<std::string> edge_ids_;
  std::vector<int> src_, rng_;
  std::vector<std::vector<int>> incoming_, outgoing_;
};

/// Closed edge path e1..ek with s(e1)=r(ek), s(e_{i+1})=r(e_i), stored in
/// the canonical rotation (lexicographically least edge id first).
struct Cycle {
  std::vector<int> edges;
  bool simple = false;
  bool has_entry = false;  // meaningful for simple_cycles_within output

  VSet vertices(const Graph& g) const {
    VSet out = 0;
    for (int e : edges) out |= vset_single(g.src(e));
    return out;
  }
};

namespace detail {

inline void canonical_rotation(const Graph& g, std::vector<int>& edges) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (g.edge_id(edges[i]) < g.edge_id(edges[best])) best = i;
  std::rotate(edges.begin(), edges.begin() + long(best), edges.end());
}

}  // namespace detail

inline constexpr std::size_t kDefaultCycleCap = 1000000;

/// All simple cycles of the full subgraph G|_M, each in canonical rotation,
/// sorted by (length, edge id sequence). `max_cycles` short-circuits the
/// backtracking (the tail classifier only needs "0, 1 or >= 2"); `cap` is
/// the hard overflow bound.
inline std::vector<Cycle> simple_cycles_within(
    const Graph& g, VSet m, std::size_t max_cycles = kDefaultCycleCap,
    std::size_t cap = kDefaultCycleCap) {
  std::vector<Cycle> out;
  const int n = g.vertex_count();
  std::vector<char> in_m(n, 0);
  for (int v = 0; v < n; ++v) in_m[v] = vset_contains(m, v);

  // Backtracking rooted at each vertex in turn; only vertices >= root may
  // appear, so every simple cycle is found exactly once, at its least vertex.
  std::vector<char> on_path(n, 0);
  std::vector<int> path_edges;
  for (int root = 0; root < n && out.size() < max_cycles; ++root) {
    if (!in_m[root]) continue;
    auto dfs = [&](auto&& self, int at) -> void {
      if (out.size() >= max_cycles) return;
      for (int e : g.outgoing(at)) {
        int to = g.rng(e);
        if (!in_m[to] || to < root) continue;
        if (to == root) {
          Cycle c;
          c.edges = path_edges;
          c.edges.push_back(e);
          detail::canonical_rotation(g, c.edges);
          c.simple = true;
          out.push_back(std::move(c));
          require(out.size() <= cap, ErrorKind::CapExceeded,
                  "simple cycle enumeration overflow");
          if (out.size() >= max_cycles) return;
        } else if (!on_path[to]) {
          on_path[to] = 1;
          path_edges.push_back(e);
          self(self, to);
          path_edges.pop_back();
          on_path[to] = 0;
        }
      }
    };
    on_path[root] = 1;
    dfs(dfs, root);
    on_path[root] = 0;
  }

  // Entry flag: some edge f of G|_M with r(f) on the cycle, f not in the
  // cycle.
  for (Cycle& c : out) {
    VSet cv = c.vertices(g);
    c.has_entry = false;
    for (int f = 0; f < g.edge_count() && !c.has_entry; ++f) {
      if (!in_m[g.src(f)] || !in_m[g.rng(f)]) continue;
      if (!vset_contains(cv, g.rng(f))) continue;
      if (std::find(c.edges.begin(), c.edges.end(), f) == c.edges.end())
        c.has_entry = true;
    }
  }

  std::sort(out.begin(), out.end(), [&](const Cycle& a, const Cycle& b) {
    if (a.edges.size() != b.edges.size())
      return a.edges.size() < b.edges.size();
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
      const auto& x = g.edge_id(a.edges[i]);
      const auto& y = g.edge_id(b.edges[i]);
      if (x != y) return x < y;
    }
    return false;
  });
  return out;
}

}  // namespace gca
