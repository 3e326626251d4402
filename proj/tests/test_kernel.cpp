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

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "bmatch/graph.hpp"
#include "bmatch/kernel.hpp"
#include "bmatch/oracle.hpp"

namespace {

using bmatch::build_graph;
using bmatch::CapacityMap;
using bmatch::Graph;
using bmatch::Vertex;

Graph random_graph(std::mt19937_64& rng, Vertex n, double p) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::bernoulli_distribution coin(p);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  return build_graph(n, edges);
}

Graph petersen() {
  return build_graph(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 5}, {1, 6}, {2, 7},
                          {3, 8}, {4, 9}, {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}});
}

// Largest matching by trying every edge subset.
std::int64_t brute_force_matching(const Graph& g) {
  const int m = g.num_edges();
  std::int64_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> used(g.num_vertices(), 0);
    bool ok = true;
    for (int e = 0; e < m && ok; ++e) {
      if (!(mask >> e & 1)) continue;
      ok = !used[g.edge(e).u]++ && !used[g.edge(e).v]++;
    }
    if (ok) best = std::max<std::int64_t>(best, __builtin_popcount(mask));
  }
  return best;
}

// Exhaustive backtracking over simple alternating paths from exposed vertices.
bool has_augmenting_path(const Graph& g, const bmatch::BMatching& x) {
  std::vector<Vertex> mate(g.num_vertices(), bmatch::kNoVertex);
  for (bmatch::EdgeId e = 0; e < g.num_edges(); ++e) {
    if (x[e]) {
      mate[g.edge(e).u] = g.edge(e).v;
      mate[g.edge(e).v] = g.edge(e).u;
    }
  }
  std::vector<char> on(g.num_vertices(), 0);
  auto dfs = [&](auto&& self, Vertex v) -> bool {
    on[v] = 1;
    for (const auto& inc : g.incident(v)) {
      const Vertex w = inc.neighbor;
      if (on[w] || mate[v] == w) continue;
      if (mate[w] == bmatch::kNoVertex) return true;
      if (on[mate[w]]) continue;
      on[w] = 1;
      if (self(self, mate[w])) return true;
      on[w] = 0;
    }
    on[v] = 0;
    return false;
  };
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (mate[s] == bmatch::kNoVertex && dfs(dfs, s)) return true;
  }
  return false;
}

TEST(MaxMatching, SmallNamedGraphs) {
  EXPECT_EQ(bmatch::max_matching(build_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}})).cardinality, 2);
  EXPECT_EQ(bmatch::max_matching(build_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})).cardinality, 2);
  const Graph p = petersen();
  EXPECT_EQ(brute_force_matching(p), 5);
  EXPECT_EQ(bmatch::max_matching(p).cardinality, 5);
}

TEST(MaxMatching, AgreesWithBruteForceAndLeavesNoAugmentingPath) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 300; ++iter) {
    const Graph g = random_graph(rng, 2 + iter % 9, 0.35);
    if (g.num_edges() > 20) continue;
    const auto r = bmatch::max_matching(g);
    CapacityMap ones(g.num_vertices(), 1);
    ASSERT_TRUE(bmatch::validate_bmatching(g, ones, r.x).ok);
    ASSERT_EQ(r.cardinality, brute_force_matching(g));
    ASSERT_FALSE(has_augmenting_path(g, r.x));
  }
}

TEST(MaxMatching, LargeRandomGraphsAgreeWithWeightedMatcher) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 20; ++iter) {
    const Graph g = random_graph(rng, 60 + iter, 0.06);
    const auto r = bmatch::max_matching(g);
    std::vector<bmatch::WeightedEdge> w;
    for (const auto& e : g.edges()) w.push_back({e.u, e.v, 1});
    const auto mate = bmatch::maximum_weight_mates(g.num_vertices(), w);
    std::int64_t other = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) other += mate[v] > v;
    ASSERT_EQ(r.cardinality, other);
  }
}

TEST(WeightedMatcher, AgreesWithBruteForceOnRandomWeights) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> weight(1, 9);
  for (int iter = 0; iter < 400; ++iter) {
    const Graph g = random_graph(rng, 2 + iter % 8, 0.5);
    if (g.num_edges() > 18) continue;
    std::vector<bmatch::WeightedEdge> w;
    for (const auto& e : g.edges()) w.push_back({e.u, e.v, weight(rng)});
    std::int64_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << g.num_edges()); ++mask) {
      std::vector<int> used(g.num_vertices(), 0);
      std::int64_t total = 0;
      bool ok = true;
      for (int e = 0; e < g.num_edges() && ok; ++e) {
        if (!(mask >> e & 1)) continue;
        ok = !used[w[e].u]++ && !used[w[e].v]++;
        total += w[e].weight;
      }
      if (ok) best = std::max(best, total);
    }
    const auto mate = bmatch::maximum_weight_mates(g.num_vertices(), w);
    std::int64_t got = 0;
    for (const auto& e : w) {
      if (mate[e.u] == e.v) {
        ASSERT_EQ(mate[e.v], e.u);
        got += e.weight;
      }
    }
    ASSERT_EQ(got, best) << "iteration " << iter;
  }
}

TEST(BMatchingKernel, Examples) {
  const Graph tri = build_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_EQ(bmatch::solve_bmatching_kernel(tri, {2, 2, 2}).cardinality, 3);
  const Graph p3 = build_graph(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(bmatch::solve_bmatching_kernel(p3, {1, 2, 1}).cardinality, 2);
  EXPECT_EQ(bmatch::solve_bmatching_kernel(tri, {0, 0, 0}).cardinality, 0);
  const Graph k4 = build_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  EXPECT_EQ(bmatch::solve_bmatching_kernel(k4, {2, 2, 2, 2}).cardinality, 4);
}

TEST(BMatchingKernel, AgreesWithExhaustiveSearch) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> cap(0, 3);
  for (int iter = 0; iter < 1000; ++iter) {
    const Vertex n = 1 + iter % 8;
    const Graph g = random_graph(rng, n, 0.45);
    CapacityMap b(n);
    for (auto& c : b) c = cap(rng);
    const auto r = bmatch::solve_bmatching_kernel(g, b);
    ASSERT_TRUE(bmatch::validate_bmatching(g, b, r.x).ok);
    ASSERT_EQ(r.cardinality, bmatch::exhaustive_bmatching(g, b).cardinality) << "iteration " << iter;
  }
}

TEST(BMatchingKernel, LargeCapacitiesMatchDirectExpansion) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cap(0, 60);
  bmatch::KernelConfig direct;
  direct.direct_cardinality_limit = 1 << 20;
  for (int iter = 0; iter < 150; ++iter) {
    const Vertex n = 2 + iter % 9;
    const Graph g = random_graph(rng, n, 0.5);
    CapacityMap b(n);
    for (auto& c : b) c = cap(rng);
    const auto fast = bmatch::solve_bmatching_kernel(g, b);
    const auto slow = bmatch::solve_bmatching_kernel(g, b, direct);
    ASSERT_TRUE(bmatch::validate_bmatching(g, b, fast.x).ok);
    ASSERT_EQ(fast.cardinality, slow.cardinality) << "iteration " << iter;
  }
}

TEST(BMatchingKernel, HugeCapacitiesStayCheap) {
  const Graph g = build_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
  const auto r = bmatch::solve_bmatching_kernel(g, {1000000, 999999, 1000000, 3});
  EXPECT_EQ(r.cardinality, 1500001);
}

TEST(BMatchingKernel, BudgetIsEnforced) {
  const Graph g = build_graph(2, {{0, 1}});
  bmatch::KernelConfig tiny;
  tiny.max_expanded_vertices = 10;
  try {
    bmatch::solve_maxcost_bmatching_kernel(g, {20, 20}, {1}, tiny);
    FAIL() << "expected kernel-budget";
  } catch (const bmatch::Error& e) {
    EXPECT_EQ(e.code(), "kernel-budget");
  }
}

TEST(MaxCostKernel, Examples) {
  // a=0, u2=1, u3=2; edges a-u2, a-u3, u2-u3 (cost 2).
  const Graph g = build_graph(3, {{0, 1}, {0, 2}, {1, 2}});
  const bmatch::CostMap c{1, 1, 2};
  auto r = bmatch::solve_maxcost_bmatching_kernel(g, {1, 1, 1}, c);
  EXPECT_EQ(r.cardinality, 1);
  EXPECT_EQ(r.cost, 2);
  EXPECT_EQ(r.x[2], 1);
  r = bmatch::solve_maxcost_bmatching_kernel(g, {2, 1, 1}, c);
  EXPECT_EQ(r.cardinality, 2);
  EXPECT_EQ(r.cost, 2);
}

TEST(MaxCostKernel, LexicographicOptimumMatchesExhaustiveSearch) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> cap(0, 2);
  std::bernoulli_distribution two(0.3);
  for (int iter = 0; iter < 500; ++iter) {
    const Vertex n = 1 + iter % 6;
    const Graph g = random_graph(rng, n, 0.55);
    CapacityMap b(n);
    for (auto& x : b) x = cap(rng);
    bmatch::CostMap c(g.num_edges());
    for (auto& x : c) x = two(rng) ? 2 : 1;
    const auto r = bmatch::solve_maxcost_bmatching_kernel(g, b, c);
    const auto plain = bmatch::solve_bmatching_kernel(g, b);
    const auto ex = bmatch::exhaustive_bmatching(g, b, c);
    ASSERT_TRUE(bmatch::validate_bmatching(g, b, r.x).ok);
    ASSERT_EQ(r.cardinality, plain.cardinality);
    ASSERT_EQ(r.cardinality, ex.cardinality);
    ASSERT_EQ(r.cost, ex.cost) << "iteration " << iter;
  }
}

TEST(Oracle, TutteRankAgreesWithExhaustiveSearch) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> cap(0, 2);
  for (int iter = 0; iter < 300; ++iter) {
    const Vertex n = 1 + iter % 8;
    const Graph g = random_graph(rng, n, 0.4);
    CapacityMap b(n);
    for (auto& x : b) x = cap(rng);
    const auto o = bmatch::oracle_bmatching(g, b);
    ASSERT_TRUE(bmatch::validate_bmatching(g, b, o.x).ok);
    ASSERT_EQ(o.cardinality, bmatch::exhaustive_bmatching(g, b).cardinality);
  }
}

TEST(Oracle, ExpandedEdgeExample) {
  const Graph g = build_graph(2, {{0, 1}});
  EXPECT_EQ(bmatch::oracle_bmatching(g, {1, 2}).cardinality, 1);
}

}  // namespace
