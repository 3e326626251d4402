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

#ifndef BMATCH_ORACLE_HPP_
#define BMATCH_ORACLE_HPP_

#include <cstdint>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bmatch/error.hpp"
#include "bmatch/graph.hpp"
#include "bmatch/weighted_matching.hpp"

namespace bmatch {

struct OracleResult {
  BMatching x;
  std::int64_t cardinality = 0;
  std::int64_t cost = 0;
};

namespace detail {

inline constexpr std::uint64_t kTuttePrime = 2147483647ULL;

inline std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  a %= kTuttePrime;
  while (e) {
    if (e & 1) r = r * a % kTuttePrime;
    a = a * a % kTuttePrime;
    e >>= 1;
  }
  return r;
}

// Rank of a random Tutte matrix over GF(p); equals twice the matching number
// with high probability and never exceeds it.
inline std::int64_t tutte_rank(int n, const std::vector<std::pair<int, int>>& edges, std::uint64_t seed) {
  std::vector<std::vector<std::uint64_t>> a(n, std::vector<std::uint64_t>(n, 0));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(1, kTuttePrime - 1);
  for (auto [u, v] : edges) {
    const std::uint64_t r = pick(rng);
    a[u][v] = r;
    a[v][u] = kTuttePrime - r;
  }
  std::int64_t rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = -1;
    for (int r = static_cast<int>(rank); r < n; ++r) {
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    const std::uint64_t inv = mod_pow(a[rank][col], kTuttePrime - 2);
    for (int r = 0; r < n; ++r) {
      if (r == rank || a[r][col] == 0) continue;
      const std::uint64_t f = a[r][col] * inv % kTuttePrime;
      for (int c = col; c < n; ++c) {
        a[r][c] = (a[r][c] + kTuttePrime - f * a[rank][c] % kTuttePrime) % kTuttePrime;
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

// Maximum b-matching through the expanded graph, computed twice by unrelated
// methods: the matching number from the rank of a random Tutte matrix, and a
// witness from the weighted (primal-dual) matcher with unit weights. The two
// must agree.
inline OracleResult oracle_bmatching(const Graph& g, const CapacityMap& b,
                                     std::int64_t max_expanded = 400) {
  if (static_cast<Vertex>(b.size()) != g.num_vertices()) {
    throw Error("capacity-range", "capacity map size does not match vertex count");
  }
  std::vector<int> first(static_cast<std::size_t>(g.num_vertices()) + 1, 0);
  std::int64_t total = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (b[v] < 0) throw Error("capacity-range", "negative capacity");
    first[v] = static_cast<int>(total);
    total += g.degree(v) == 0 ? 0 : b[v];
    if (total > max_expanded) throw Error("oracle-budget", "expanded graph too large for the oracle");
  }
  first[g.num_vertices()] = static_cast<int>(total);
  const int nv = static_cast<int>(total);
  std::vector<std::pair<int, int>> edges;
  std::vector<WeightedEdge> wedges;
  std::vector<EdgeId> origin;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    for (int i = first[ed.u]; i < first[ed.u + 1]; ++i) {
      for (int j = first[ed.v]; j < first[ed.v + 1]; ++j) {
        edges.emplace_back(i, j);
        wedges.push_back({i, j, 1});
        origin.push_back(e);
      }
    }
  }
  const std::vector<int> mate = maximum_weight_mates(nv, wedges);
  OracleResult r;
  r.x.assign(g.num_edges(), 0);
  for (std::size_t k = 0; k < wedges.size(); ++k) {
    if (mate[wedges[k].u] == wedges[k].v) ++r.x[origin[k]];
  }
  r.cardinality = cardinality(r.x);
  std::int64_t rank = 0;
  for (std::uint64_t trial = 0; trial < 4 && rank != 2 * r.cardinality; ++trial) {
    rank = std::max(rank, detail::tutte_rank(nv, edges, 0x9e3779b97f4a7c15ULL * (trial + 1) + total));
  }
  if (rank != 2 * r.cardinality) {
    throw Error("oracle-disagreement", "Tutte rank and weighted witness disagree");
  }
  r.cost = r.cardinality;
  return r;
}

// Exhaustive search over all b-matchings (memoized on residual capacities),
// maximizing cardinality first and then the cost Σ c_e x_e. Intended for
// n <= 8 and small capacities.
inline OracleResult exhaustive_bmatching(const Graph& g, const CapacityMap& b,
                                         const std::vector<std::int64_t>& cost = {}) {
  const Vertex n = g.num_vertices();
  if (n > 10) throw Error("oracle-budget", "exhaustive search limited to 10 vertices");
  std::vector<std::int64_t> cap(n);
  for (Vertex v = 0; v < n; ++v) cap[v] = std::min<std::int64_t>(b[v], 7);
  for (Vertex v = 0; v < n; ++v) {
    if (b[v] > 7) throw Error("oracle-budget", "exhaustive search limited to capacities <= 7");
  }
  const EdgeId m = g.num_edges();
  auto c_of = [&](EdgeId e) { return cost.empty() ? std::int64_t{1} : cost[e]; };
  // State: edge index + residual capacities in 3 bits each.
  using Value = std::pair<std::int64_t, std::int64_t>;
  std::unordered_map<std::uint64_t, Value> memo;
  std::vector<std::int64_t> res = cap;
  auto key = [&](EdgeId e) {
    std::uint64_t k = static_cast<std::uint64_t>(e);
    for (Vertex v = 0; v < n; ++v) k = (k << 3) | static_cast<std::uint64_t>(res[v]);
    return k;
  };
  auto best = [&](auto&& self, EdgeId e) -> Value {
    if (e == m) return {0, 0};
    const std::uint64_t k = key(e);
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    const Edge& ed = g.edge(e);
    const std::int64_t hi = std::min(res[ed.u], res[ed.v]);
    Value out{-1, 0};
    for (std::int64_t w = 0; w <= hi; ++w) {
      res[ed.u] -= w;
      res[ed.v] -= w;
      Value sub = self(self, e + 1);
      res[ed.u] += w;
      res[ed.v] += w;
      sub.first += w;
      sub.second += w * c_of(e);
      if (sub > out) out = sub;
    }
    memo.emplace(k, out);
    return out;
  };
  const Value top = best(best, 0);
  OracleResult r;
  r.x.assign(m, 0);
  // Walk the memo to recover a witness.
  for (EdgeId e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    const Value want = e == 0 ? top : best(best, e);
    const std::int64_t hi = std::min(res[ed.u], res[ed.v]);
    for (std::int64_t w = 0; w <= hi; ++w) {
      res[ed.u] -= w;
      res[ed.v] -= w;
      Value sub = best(best, e + 1);
      sub.first += w;
      sub.second += w * c_of(e);
      if (sub == want) {
        r.x[e] = w;
        break;
      }
      res[ed.u] += w;
      res[ed.v] += w;
    }
  }
  r.cardinality = top.first;
  r.cost = top.second;
  return r;
}

}  // namespace bmatch

#endif  // BMATCH_ORACLE_HPP_
