// Copyright 2026 The bmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BMATCH_GRAPH_HPP_
#define BMATCH_GRAPH_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bmatch/error.hpp"

namespace bmatch {

using Vertex = std::int32_t;
using EdgeId = std::int32_t;

inline constexpr Vertex kNoVertex = -1;
inline constexpr EdgeId kNoEdge = -1;

struct Edge {
  Vertex u = kNoVertex;
  Vertex v = kNoVertex;

  Vertex other(Vertex w) const { return w == u ? v : u; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  Vertex neighbor;
  EdgeId edge;
};

// Per-vertex capacities b_v >= 0, indexed by vertex id.
using CapacityMap = std::vector<std::int64_t>;
// Per-edge weights x_e >= 0, indexed by edge id.
using BMatching = std::vector<std::int64_t>;

// Largest accepted ||b||_1. Profile searches double capacities transiently.
inline constexpr std::int64_t kMaxTotalCapacity = std::int64_t{1} << 62;

// Simple undirected graph with dense vertex ids 0..n-1, stable edge ids
// 0..m-1 and a compressed adjacency array.
class Graph {
 public:
  Graph() = default;

  // Trusted construction: `edges` must already be loop-free, in range and
  // duplicate-free. Use build_graph() for untrusted input.
  static Graph from_unique_edges(Vertex n, std::vector<Edge> edges) {
    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const Edge& e : g.edges_) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (Vertex v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
    g.incidences_.resize(2 * g.edges_.size());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (EdgeId id = 0; id < static_cast<EdgeId>(g.edges_.size()); ++id) {
      const Edge& e = g.edges_[id];
      g.incidences_[fill[e.u]++] = {e.v, id};
      g.incidences_[fill[e.v]++] = {e.u, id};
    }
    return g;
  }

  Vertex num_vertices() const { return n_; }
  EdgeId num_edges() const { return static_cast<EdgeId>(edges_.size()); }

  const Edge& edge(EdgeId id) const { return edges_[id]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Incidence> incident(Vertex v) const {
    return {incidences_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  // Linear scan of the shorter adjacency list.
  EdgeId find_edge(Vertex a, Vertex b) const {
    if (degree(a) > degree(b)) std::swap(a, b);
    for (const Incidence& inc : incident(a)) {
      if (inc.neighbor == b) return inc.edge;
    }
    return kNoEdge;
  }

 private:
  Vertex n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidences_;
};

inline std::uint64_t pair_key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Validated construction. Duplicate pairs are dropped (first occurrence keeps
// its position), loops and out-of-range endpoints are rejected.
inline Graph build_graph(Vertex n, std::span<const std::pair<Vertex, Vertex>> edge_list) {
  if (n < 0) throw Error("vertex-range", "negative vertex count");
  std::vector<Edge> edges;
  edges.reserve(edge_list.size());
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edge_list.size() * 2);
  for (auto [u, v] : edge_list) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw Error("vertex-range", "edge {" + std::to_string(u) + "," +
                                      std::to_string(v) + "} outside 0.." +
                                      std::to_string(n - 1));
    }
    if (u == v) throw Error("loop", "loop at vertex " + std::to_string(u));
    if (seen.insert(pair_key(u, v)).second) edges.push_back({u, v});
  }
  return Graph::from_unique_edges(n, std::move(edges));
}

inline Graph build_graph(Vertex n, std::initializer_list<std::pair<Vertex, Vertex>> edge_list) {
  return build_graph(n, std::span<const std::pair<Vertex, Vertex>>(edge_list.begin(), edge_list.size()));
}

inline std::int64_t total_capacity(const CapacityMap& b) {
  std::int64_t total = 0;
  for (std::int64_t c : b) {
    if (c < 0) throw Error("capacity-range", "negative capacity");
    if (c >= kMaxTotalCapacity - total) {
      throw Error("capacity-range", "total capacity must stay below 2^62");
    }
    total += c;
  }
  return total;
}

inline std::int64_t cardinality(const BMatching& x) {
  std::int64_t s = 0;
  for (std::int64_t w : x) s += w;
  return s;
}

inline std::int64_t x_degree(const Graph& g, const BMatching& x, Vertex v) {
  std::int64_t d = 0;
  for (const Incidence& inc : g.incident(v)) d += x[inc.edge];
  return d;
}

struct ValidationReport {
  bool ok = true;
  std::string message;
  Vertex vertex = kNoVertex;
  EdgeId edge = kNoEdge;

  explicit operator bool() const { return ok; }
};

inline ValidationReport validate_bmatching(const Graph& g, const CapacityMap& b,
                                           const BMatching& x) {
  if (static_cast<EdgeId>(x.size()) != g.num_edges()) {
    return {false, "weight vector size differs from edge count", kNoVertex, kNoEdge};
  }
  if (static_cast<Vertex>(b.size()) != g.num_vertices()) {
    return {false, "capacity vector size differs from vertex count", kNoVertex, kNoEdge};
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (x[e] < 0) return {false, "negative weight on edge " + std::to_string(e), kNoVertex, e};
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const std::int64_t d = x_degree(g, x, v);
    if (d > b[v]) {
      return {false,
              "capacity violation at vertex " + std::to_string(v) + ": degree " +
                  std::to_string(d) + " > " + std::to_string(b[v]),
              v, kNoEdge};
    }
  }
  return {};
}

// b'_v = min(b_v, sum of neighbor capacities). Preserves the optimum.
inline CapacityMap truncate_capacities(const Graph& g, const CapacityMap& b) {
  CapacityMap out(b.size());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    std::int64_t offer = 0;
    for (const Incidence& inc : g.incident(v)) {
      offer += b[inc.neighbor];
      if (offer >= b[v]) break;
    }
    out[v] = std::min(b[v], offer);
  }
  return out;
}

// Component index per vertex, components numbered by smallest member.
inline std::vector<Vertex> connected_components(const Graph& g, Vertex* count = nullptr) {
  std::vector<Vertex> comp(g.num_vertices(), kNoVertex);
  std::vector<Vertex> stack;
  Vertex next = 0;
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (comp[s] != kNoVertex) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (const Incidence& inc : g.incident(v)) {
        if (comp[inc.neighbor] == kNoVertex) {
          comp[inc.neighbor] = next;
          stack.push_back(inc.neighbor);
        }
      }
    }
    ++next;
  }
  if (count != nullptr) *count = next;
  return comp;
}

inline bool is_connected(const Graph& g) {
  Vertex count = 0;
  connected_components(g, &count);
  return count <= 1;
}

struct Subgraph {
  Graph graph;
  std::vector<Vertex> to_parent;     // local vertex -> parent vertex
  std::vector<EdgeId> edge_to_parent;  // local edge -> parent edge
};

// Induced subgraph on `vertices` (local ids follow the given order).
inline Subgraph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
  std::vector<Vertex> local(g.num_vertices(), kNoVertex);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<Vertex>(i);
  Subgraph sub;
  sub.to_parent.assign(vertices.begin(), vertices.end());
  for (Vertex v : vertices) {
    for (const Incidence& inc : g.incident(v)) {
      if (local[inc.neighbor] != kNoVertex && v < inc.neighbor) sub.edge_to_parent.push_back(inc.edge);
    }
  }
  std::sort(sub.edge_to_parent.begin(), sub.edge_to_parent.end());
  std::vector<Edge> edges;
  edges.reserve(sub.edge_to_parent.size());
  for (EdgeId e : sub.edge_to_parent) edges.push_back({local[g.edge(e).u], local[g.edge(e).v]});
  sub.graph = Graph::from_unique_edges(static_cast<Vertex>(vertices.size()), std::move(edges));
  return sub;
}

}  // namespace bmatch

#endif  // BMATCH_GRAPH_HPP_
