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

#ifndef BMATCH_TESTKIT_HPP_
#define BMATCH_TESTKIT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "bmatch/error.hpp"
#include "bmatch/graph.hpp"
#include "bmatch/oracle.hpp"

// Generators draw from std::mt19937_64 through plain modular reduction, so a
// seed gives the same graph on every standard library.
namespace bmatch {

namespace detail {

inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

inline Graph graph_from_adjacency(const std::vector<std::vector<Vertex>>& adj) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < static_cast<Vertex>(adj.size()); ++u) {
    for (Vertex v : adj[u]) {
      if (u < v) edges.push_back({u, v});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  return Graph::from_unique_edges(static_cast<Vertex>(adj.size()), std::move(edges));
}

}  // namespace detail

// Grows K2 by pendant vertices (probability 1/2), true twins (1/4) and false
// twins (1/4) of a uniformly chosen vertex. These operations generate exactly
// the distance-hereditary graphs.
inline Graph gen_distance_hereditary(Vertex n, std::uint64_t seed) {
  if (n < 2) throw Error("vertex-range", "distance-hereditary generator needs n >= 2");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Vertex>> adj(n);
  adj[0] = {1};
  adj[1] = {0};
  for (Vertex v = 2; v < n; ++v) {
    const Vertex x = static_cast<Vertex>(detail::draw(rng, v));
    const std::uint64_t op = detail::draw(rng, 4);
    if (op < 2) {
      adj[v].push_back(x);
    } else {
      adj[v] = adj[x];
      if (op == 2) adj[v].push_back(x);
    }
    for (Vertex z : adj[v]) adj[z].push_back(v);
  }
  return detail::graph_from_adjacency(adj);
}

// Random connected graph: a random spanning tree plus each other pair with
// probability p.
inline Graph gen_connected(Vertex n, double p, std::uint64_t seed) {
  if (n < 1) throw Error("vertex-range", "generator needs n >= 1");
  std::mt19937_64 rng(seed);
  const std::uint64_t threshold = static_cast<std::uint64_t>(p * 1e6);
  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v < n; ++v) {
    const Vertex u = static_cast<Vertex>(detail::draw(rng, v));
    has[u][v] = 1;
    edges.emplace_back(u, v);
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (!has[u][v] && detail::draw(rng, 1000000) < threshold) edges.emplace_back(u, v);
    }
  }
  return build_graph(n, edges);
}

inline CapacityMap gen_capacities(Vertex n, std::int64_t max_b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CapacityMap b(n);
  for (auto& c : b) c = static_cast<std::int64_t>(detail::draw(rng, static_cast<std::uint64_t>(max_b) + 1));
  return b;
}

// Composes random pieces of order 3..k along a random tree: an original
// vertex of the current graph becomes a marker, mated to one vertex of a fresh
// piece. Each piece is a cycle with random chords, hence connected. Adjacency
// in the result follows alternating paths through mated markers, so every
// piece is a bag of a split decomposition and split_width <= k.
inline Graph gen_bounded_splitwidth(Vertex k, Vertex target_n, std::uint64_t seed) {
  if (k < 3) throw Error("vertex-range", "bounded split-width generator needs k >= 3");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Vertex>> adj;  // piece edges between nodes
  std::vector<Vertex> mate;              // kNoVertex for original nodes
  std::vector<Vertex> originals;
  auto add_piece = [&](Vertex q) {
    const Vertex base = static_cast<Vertex>(adj.size());
    adj.resize(base + q);
    mate.resize(base + q, kNoVertex);
    auto link = [&](Vertex a, Vertex b) {
      adj[base + a].push_back(base + b);
      adj[base + b].push_back(base + a);
    };
    for (Vertex i = 0; i < q; ++i) link(i, (i + 1) % q);
    for (Vertex i = 0; i < q; ++i) {
      for (Vertex j = i + 2; j < q; ++j) {
        if (!(i == 0 && j == q - 1) && detail::draw(rng, 10) < 3) link(i, j);
      }
    }
    return base;
  };
  auto piece_order = [&]() { return static_cast<Vertex>(3 + detail::draw(rng, static_cast<std::uint64_t>(k - 2))); };
  {
    const Vertex q = piece_order();
    const Vertex base = add_piece(q);
    for (Vertex i = 0; i < q; ++i) originals.push_back(base + i);
  }
  while (static_cast<Vertex>(originals.size()) < target_n) {
    const std::size_t pick = detail::draw(rng, originals.size());
    const Vertex x = originals[pick];
    originals[pick] = originals.back();
    originals.pop_back();
    const Vertex q = piece_order();
    const Vertex base = add_piece(q);
    const Vertex y = base + static_cast<Vertex>(detail::draw(rng, static_cast<std::uint64_t>(q)));
    mate[x] = y;
    mate[y] = x;
    for (Vertex i = 0; i < q; ++i) {
      if (base + i != y) originals.push_back(base + i);
    }
  }
  // Random final labels.
  std::sort(originals.begin(), originals.end());
  std::vector<Vertex> order(originals.size());
  for (Vertex i = 0; i < static_cast<Vertex>(order.size()); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[detail::draw(rng, i)]);
  std::vector<Vertex> label(adj.size(), kNoVertex);
  for (std::size_t i = 0; i < originals.size(); ++i) label[originals[i]] = order[i];

  std::vector<std::vector<Vertex>> out(originals.size());
  std::vector<Vertex> stack;
  for (Vertex a : originals) {
    // Neighbours of a: its piece neighbours, with each marker replaced by
    // whatever its mate sees.
    stack.assign(adj[a].begin(), adj[a].end());
    while (!stack.empty()) {
      const Vertex z = stack.back();
      stack.pop_back();
      if (mate[z] == kNoVertex) {
        if (label[a] < label[z]) out[label[a]].push_back(label[z]);
        continue;
      }
      for (Vertex y : adj[mate[z]]) stack.push_back(y);
    }
  }
  std::vector<Edge> edges;
  for (Vertex u = 0; u < static_cast<Vertex>(out.size()); ++u) {
    std::sort(out[u].begin(), out[u].end());
    for (Vertex v : out[u]) edges.push_back({u, v});
  }
  return Graph::from_unique_edges(static_cast<Vertex>(out.size()), std::move(edges));
}

// [mu(0), ..., mu(t_max)] through the expansion oracle.
inline std::vector<std::int64_t> sweep_mu(const Graph& g, const CapacityMap& b, Vertex w, std::int64_t t_max,
                                          std::int64_t max_expanded = 2000) {
  std::vector<std::int64_t> mu;
  CapacityMap bt = b;
  for (std::int64_t t = 0; t <= t_max; ++t) {
    bt[w] = t;
    mu.push_back(oracle_bmatching(g, bt, max_expanded).cardinality);
  }
  return mu;
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("fit", "need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace bmatch

#endif  // BMATCH_TESTKIT_HPP_
