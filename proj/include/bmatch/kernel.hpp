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

#ifndef BMATCH_KERNEL_HPP_
#define BMATCH_KERNEL_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bmatch/blossom.hpp"
#include "bmatch/error.hpp"
#include "bmatch/graph.hpp"
#include "bmatch/weighted_matching.hpp"

namespace bmatch {

using CostMap = std::vector<std::int64_t>;

struct KernelConfig {
  // Expanded-graph limits; exceeding either raises "kernel-budget".
  std::int64_t max_expanded_vertices = 50000;
  std::int64_t max_expanded_edges = 20000000;
  // Cardinality solves whose expansion would exceed this many copies are
  // run on the compressed residual graph instead (same optimum).
  std::int64_t direct_cardinality_limit = 256;
};

struct KernelResult {
  BMatching x;
  std::int64_t cardinality = 0;
  std::int64_t cost = 0;
};

namespace detail {

struct Expansion {
  Graph graph;
  std::vector<Vertex> owner;
};

inline Expansion expand(const Graph& g, const CapacityMap& t, const KernelConfig& cfg) {
  Expansion out;
  std::vector<Vertex> offset(static_cast<std::size_t>(g.num_vertices()) + 1, 0);
  std::int64_t total = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    total += t[v];
    if (total > cfg.max_expanded_vertices) {
      throw Error("kernel-budget", "expanded graph exceeds " +
                                       std::to_string(cfg.max_expanded_vertices) + " vertices");
    }
    offset[v + 1] = static_cast<Vertex>(total);
  }
  std::int64_t edge_total = 0;
  for (const Edge& e : g.edges()) {
    edge_total += t[e.u] * t[e.v];
    if (edge_total > cfg.max_expanded_edges) {
      throw Error("kernel-budget", "expanded graph exceeds " +
                                       std::to_string(cfg.max_expanded_edges) + " edges");
    }
  }
  out.owner.resize(static_cast<std::size_t>(total));
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (Vertex i = offset[v]; i < offset[v + 1]; ++i) out.owner[i] = v;
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(edge_total));
  for (const Edge& e : g.edges()) {
    for (Vertex i = offset[e.u]; i < offset[e.u + 1]; ++i) {
      for (Vertex j = offset[e.v]; j < offset[e.v + 1]; ++j) edges.push_back({i, j});
    }
  }
  out.graph = Graph::from_unique_edges(static_cast<Vertex>(total), std::move(edges));
  return out;
}

template <typename Mates>
BMatching fold_mates(const Graph& g, const std::vector<Vertex>& owner, const Mates& mate) {
  BMatching x(g.num_edges(), 0);
  for (std::size_t a = 0; a < mate.size(); ++a) {
    const auto b = mate[a];
    if (b < 0 || static_cast<std::size_t>(b) < a) continue;
    const EdgeId e = g.find_edge(owner[a], owner[b]);
    if (e == kNoEdge) throw Error("internal", "matched copies without an original edge");
    ++x[e];
  }
  return x;
}

inline BMatching expansion_bmatching(const Graph& g, const CapacityMap& t, const KernelConfig& cfg) {
  Expansion ex = expand(g, t, cfg);
  CardinalityMatcher m(ex.graph);
  return fold_mates(g, ex.owner, m.solve());
}

// One round on the residual graph of x: every vertex keeps at most two free
// copies and every edge at most two of its matched copy pairs. A shortest
// augmenting path of the full expansion never needs more, so "no
// augmentation here" certifies optimality of x.
inline bool improve_on_residual(const Graph& g, const CapacityMap& t, BMatching& x) {
  std::vector<Vertex> first(static_cast<std::size_t>(g.num_vertices()) + 1, 0);
  std::vector<std::int64_t> deg(g.num_vertices(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    deg[g.edge(e).u] += x[e];
    deg[g.edge(e).v] += x[e];
  }
  Vertex total = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    first[v] = total;
    total += static_cast<Vertex>(std::min<std::int64_t>(t[v] - deg[v], 2));
    for (const Incidence& inc : g.incident(v)) {
      total += static_cast<Vertex>(std::min<std::int64_t>(x[inc.edge], 2));
    }
  }
  first[g.num_vertices()] = total;
  std::vector<Vertex> owner(static_cast<std::size_t>(total));
  std::vector<Vertex> mate(static_cast<std::size_t>(total), kNoVertex);
  // Pair copies of edge e are laid out at pair_at[e][side].
  std::vector<std::array<Vertex, 2>> pair_at(g.num_edges(), {kNoVertex, kNoVertex});
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    Vertex pos = first[v];
    const Vertex free_copies = static_cast<Vertex>(std::min<std::int64_t>(t[v] - deg[v], 2));
    for (Vertex i = 0; i < free_copies; ++i) owner[pos++] = v;
    for (const Incidence& inc : g.incident(v)) {
      const Vertex p = static_cast<Vertex>(std::min<std::int64_t>(x[inc.edge], 2));
      if (p == 0) continue;
      pair_at[inc.edge][g.edge(inc.edge).u == v ? 0 : 1] = pos;
      for (Vertex i = 0; i < p; ++i) owner[pos++] = v;
    }
  }
  std::int64_t kept = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Vertex p = static_cast<Vertex>(std::min<std::int64_t>(x[e], 2));
    for (Vertex i = 0; i < p; ++i) {
      mate[pair_at[e][0] + i] = pair_at[e][1] + i;
      mate[pair_at[e][1] + i] = pair_at[e][0] + i;
    }
    kept += p;
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    for (Vertex i = first[e.u]; i < first[e.u + 1]; ++i) {
      for (Vertex j = first[e.v]; j < first[e.v + 1]; ++j) edges.push_back({i, j});
    }
  }
  Graph residual = Graph::from_unique_edges(total, std::move(edges));
  CardinalityMatcher m(residual);
  const std::vector<Vertex>& after = m.solve(std::move(mate));
  std::int64_t matched = 0;
  for (Vertex a = 0; a < total; ++a) {
    if (after[a] > a) ++matched;
  }
  if (matched == kept) return false;
  const BMatching delta = fold_mates(g, owner, after);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    x[e] += delta[e] - std::min<std::int64_t>(x[e], 2);
  }
  return true;
}

// Capacity scaling: solve for floor(t/2), double, then repair on the
// residual graph. Doubling loses at most O(n) units, so each level needs few
// rounds regardless of how large the capacities are.
inline BMatching scaled_bmatching(const Graph& g, const CapacityMap& t, const KernelConfig& cfg) {
  std::int64_t total = 0;
  for (std::int64_t c : t) total += c;
  if (total <= cfg.direct_cardinality_limit) return expansion_bmatching(g, t, cfg);
  CapacityMap half(t.size());
  for (std::size_t v = 0; v < t.size(); ++v) half[v] = t[v] / 2;
  BMatching x = scaled_bmatching(g, truncate_capacities(g, half), cfg);
  for (auto& w : x) w *= 2;
  while (improve_on_residual(g, t, x)) {
  }
  return x;
}

// True when expand() would stay within the configured limits.
inline bool expansion_fits(const Graph& g, const CapacityMap& t, const KernelConfig& cfg) {
  std::int64_t total = 0;
  for (std::int64_t c : t) {
    total += c;
    if (total > cfg.max_expanded_vertices) return false;
  }
  std::int64_t edge_total = 0;
  for (const Edge& e : g.edges()) {
    edge_total += t[e.u] * t[e.v];
    if (edge_total > cfg.max_expanded_edges) return false;
  }
  return true;
}

inline void check_inputs(const Graph& g, const CapacityMap& b) {
  if (static_cast<Vertex>(b.size()) != g.num_vertices()) {
    throw Error("capacity-range", "capacity map size does not match vertex count");
  }
  total_capacity(b);
}

}  // namespace detail

// Exact black-box solvers for small graphs. Counts invocations so callers can
// report how often they hit the kernel.
class Kernel {
 public:
  explicit Kernel(KernelConfig config = {}) : config_(config) {}

  const KernelConfig& config() const { return config_; }
  std::int64_t calls() const { return calls_; }
  void reset_calls() { calls_ = 0; }

  KernelResult max_matching(const Graph& g) {
    ++calls_;
    CardinalityMatcher m(g);
    const std::vector<Vertex>& mate = m.solve();
    KernelResult r;
    r.x.assign(g.num_edges(), 0);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (mate[v] > v) r.x[g.find_edge(v, mate[v])] = 1;
    }
    r.cardinality = cardinality(r.x);
    r.cost = r.cardinality;
    return r;
  }

  KernelResult solve_bmatching(const Graph& g, const CapacityMap& b) {
    ++calls_;
    detail::check_inputs(g, b);
    const CapacityMap t = truncate_capacities(g, b);
    KernelResult r;
    r.x = detail::scaled_bmatching(g, t, config_);
    r.cardinality = cardinality(r.x);
    r.cost = r.cardinality;
    return r;
  }

  // Maximum cardinality first, then maximum cost, via weights K + c_e on the
  // expansion with K larger than any achievable total cost.
  bool maxcost_fits(const Graph& g, const CapacityMap& b) const {
    return detail::expansion_fits(g, truncate_capacities(g, b), config_);
  }

  KernelResult solve_maxcost(const Graph& g, const CapacityMap& b, const CostMap& c) {
    ++calls_;
    detail::check_inputs(g, b);
    if (static_cast<EdgeId>(c.size()) != g.num_edges()) {
      throw Error("cost-range", "cost map size does not match edge count");
    }
    const CapacityMap t = truncate_capacities(g, b);
    detail::Expansion ex = detail::expand(g, t, config_);
    std::int64_t big = 1;
    std::vector<WeightedEdge> wedges;
    wedges.reserve(static_cast<std::size_t>(ex.graph.num_edges()));
    for (const Edge& e : ex.graph.edges()) {
      const std::int64_t ce = c[g.find_edge(ex.owner[e.u], ex.owner[e.v])];
      if (ce < 0) throw Error("cost-range", "negative edge cost");
      big += ce;
      wedges.push_back({e.u, e.v, ce});
    }
    for (auto& w : wedges) w.weight += big;
    const std::vector<int> mate = maximum_weight_mates(ex.graph.num_vertices(), std::move(wedges));
    KernelResult r;
    r.x = detail::fold_mates(g, ex.owner, mate);
    r.cardinality = cardinality(r.x);
    for (EdgeId e = 0; e < g.num_edges(); ++e) r.cost += c[e] * r.x[e];
    return r;
  }

 private:
  KernelConfig config_;
  std::int64_t calls_ = 0;
};

inline KernelResult max_matching(const Graph& g) { return Kernel().max_matching(g); }

inline KernelResult solve_bmatching_kernel(const Graph& g, const CapacityMap& b,
                                           const KernelConfig& config = {}) {
  return Kernel(config).solve_bmatching(g, b);
}

inline KernelResult solve_maxcost_bmatching_kernel(const Graph& g, const CapacityMap& b,
                                                   const CostMap& c,
                                                   const KernelConfig& config = {}) {
  return Kernel(config).solve_maxcost(g, b, c);
}

}  // namespace bmatch

#endif  // BMATCH_KERNEL_HPP_
