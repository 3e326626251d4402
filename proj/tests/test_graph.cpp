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
#include <string>
#include <vector>

#include "bmatch/graph.hpp"
#include "bmatch/graph_io.hpp"
#include "bmatch/weight_store.hpp"

namespace {

using bmatch::build_graph;
using bmatch::CapacityMap;
using bmatch::Graph;
using bmatch::Vertex;

template <typename F>
std::string error_code(F&& f) {
  try {
    f();
  } catch (const bmatch::Error& e) {
    return e.code();
  }
  return "";
}

Graph random_graph(std::mt19937_64& rng, Vertex n, double p) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::bernoulli_distribution coin(p);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(v, u);
    }
  }
  return build_graph(n, edges);
}

TEST(BuildGraph, PathAndDedup) {
  const Graph p3 = build_graph(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(p3.num_edges(), 2);
  EXPECT_EQ(p3.degree(1), 2);
  const Graph c4 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 1}});
  EXPECT_EQ(c4.num_edges(), 4);
  EXPECT_EQ(c4.find_edge(1, 0), 0);
  EXPECT_EQ(c4.find_edge(0, 2), bmatch::kNoEdge);
}

TEST(BuildGraph, RejectsLoopsAndRange) {
  EXPECT_EQ(error_code([] { build_graph(2, {{0, 0}}); }), "loop");
  EXPECT_EQ(error_code([] { build_graph(2, {{0, 2}}); }), "vertex-range");
  EXPECT_EQ(error_code([] { build_graph(2, {{-1, 1}}); }), "vertex-range");
}

TEST(BuildGraph, AdjacencySizesSumToTwiceEdges) {
  std::mt19937_64 rng(1);
  for (int iter = 0; iter < 200; ++iter) {
    const Graph g = random_graph(rng, iter % 30, 0.3);
    std::size_t total = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      total += g.incident(v).size();
      for (const auto& inc : g.incident(v)) {
        ASSERT_EQ(g.edge(inc.edge).other(v), inc.neighbor);
      }
    }
    ASSERT_EQ(total, 2u * static_cast<std::size_t>(g.num_edges()));
  }
}

TEST(ValidateBMatching, TriangleCases) {
  const Graph tri = build_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  auto r = bmatch::validate_bmatching(tri, {1, 1, 1}, {1, 0, 0});
  EXPECT_TRUE(r.ok);
  r = bmatch::validate_bmatching(tri, {1, 1, 1}, {1, 1, 0});
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.vertex, 1);
  EXPECT_NE(r.message.find("capacity violation"), std::string::npos);
  r = bmatch::validate_bmatching(tri, {2, 2, 2}, {1, 1, 1});
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(bmatch::cardinality({1, 1, 1}), 3);
  EXPECT_FALSE(bmatch::validate_bmatching(tri, {2, 2, 2}, {-1, 0, 0}).ok);
  EXPECT_FALSE(bmatch::validate_bmatching(tri, {2, 2, 2}, {0, 0}).ok);
}

TEST(Capacities, TotalAndOverflow) {
  EXPECT_EQ(bmatch::total_capacity({1, 2, 3}), 6);
  EXPECT_EQ(error_code([] { bmatch::total_capacity({-1}); }), "capacity-range");
  EXPECT_EQ(error_code([] { bmatch::total_capacity({bmatch::kMaxTotalCapacity, 1}); }),
            "capacity-range");
}

TEST(Capacities, TruncationExamples) {
  const Graph p3 = build_graph(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(bmatch::truncate_capacities(p3, {1, 100, 1}), (CapacityMap{1, 2, 1}));
  const Graph iso = build_graph(1, std::vector<std::pair<Vertex, Vertex>>{});
  EXPECT_EQ(bmatch::truncate_capacities(iso, {5}), (CapacityMap{0}));
  const Graph tri = build_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_EQ(bmatch::truncate_capacities(tri, {2, 2, 2}), (CapacityMap{2, 2, 2}));
}

TEST(Capacities, TruncationIsIdempotent) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> cap(0, 50);
  for (int iter = 0; iter < 500; ++iter) {
    const Graph g = random_graph(rng, 1 + iter % 12, 0.3);
    CapacityMap b(g.num_vertices());
    for (auto& c : b) c = cap(rng);
    const CapacityMap once = bmatch::truncate_capacities(g, b);
    ASSERT_EQ(bmatch::truncate_capacities(g, once), once);
  }
}

TEST(Components, CountsAndInducedSubgraph) {
  const Graph g = build_graph(6, {{0, 1}, {1, 2}, {3, 4}});
  Vertex count = 0;
  const auto comp = bmatch::connected_components(g, &count);
  EXPECT_EQ(count, 3);
  EXPECT_EQ(comp[2], comp[0]);
  EXPECT_NE(comp[3], comp[0]);
  EXPECT_FALSE(bmatch::is_connected(g));
  const std::vector<Vertex> keep{2, 1, 4};
  const auto sub = bmatch::induced_subgraph(g, keep);
  EXPECT_EQ(sub.graph.num_vertices(), 3);
  EXPECT_EQ(sub.graph.num_edges(), 1);
  const auto& e = sub.graph.edge(0);
  EXPECT_EQ(g.find_edge(sub.to_parent[e.u], sub.to_parent[e.v]), sub.edge_to_parent[0]);
}

TEST(InstanceIo, RoundTripIsByteExact) {
  const std::string text =
      "p bmatch 4 3\n"
      "b 0 1\n"
      "b 1 2\n"
      "b 2 1\n"
      "b 3 7\n"
      "e 0 1\n"
      "e 1 2\n"
      "e 2 3\n";
  const auto inst = bmatch::parse_instance(text);
  EXPECT_EQ(bmatch::serialize_instance(inst), text);
}

TEST(InstanceIo, DefaultsCommentsAndDuplicates) {
  const auto inst = bmatch::parse_instance("# hi\np bmatch 3 3\ne 0 1\ne 1 0\ne 1 2\n");
  EXPECT_EQ(inst.graph.num_edges(), 2);
  EXPECT_EQ(inst.capacities, (CapacityMap{1, 1, 1}));
}

TEST(InstanceIo, ErrorsCarryLineNumbers) {
  try {
    bmatch::parse_instance("p bmatch 2 1\nb 0 x\ne 0 1\n");
    FAIL();
  } catch (const bmatch::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_EQ(error_code([] { bmatch::parse_instance("p graph 2 1\n"); }), "parse");
  EXPECT_EQ(error_code([] { bmatch::parse_instance("p bmatch 2 2\ne 0 1\n"); }), "parse");
  EXPECT_EQ(error_code([] { bmatch::parse_instance("p bmatch 2 1\ne 0 0\n"); }), "parse");
  EXPECT_EQ(error_code([] { bmatch::parse_instance("e 0 1\n"); }), "parse");
}

TEST(InstanceIo, RandomRoundTrips) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> cap(0, 9);
  for (int iter = 0; iter < 100; ++iter) {
    const Graph g = random_graph(rng, iter % 20, 0.25);
    CapacityMap b(g.num_vertices());
    for (auto& c : b) c = cap(rng);
    const std::string once = bmatch::serialize_instance(g, b);
    const auto back = bmatch::parse_instance(once);
    ASSERT_EQ(back.capacities, b);
    ASSERT_EQ(bmatch::serialize_instance(back), once);
  }
}

TEST(WeightStore, SplitGivesIndependentViews) {
  bmatch::WeightStore s(3);
  s.set(1, 3);
  auto [u, w] = s.split(1);
  EXPECT_EQ(u.get(1), 3);
  EXPECT_EQ(w.get(1), 3);
  u.set(1, 5);
  EXPECT_EQ(w.get(1), 3);
  u.set(0, 2);
  EXPECT_EQ(w.get(0), 2);
  s.merge(u, w);
  EXPECT_EQ(s.get(1), 5);
  EXPECT_EQ(s.snapshot(), (bmatch::BMatching{2, 5, 0}));
}

TEST(WeightStore, MergeTakesMax) {
  for (auto [a, b] : std::vector<std::pair<int, int>>{{5, 3}, {0, 0}, {2, 2}, {1, 4}}) {
    bmatch::WeightStore s(1);
    auto [u, w] = s.split(0);
    u.set(0, a);
    w.set(0, b);
    s.merge(u, w);
    EXPECT_EQ(s.get(0), std::max(a, b));
  }
}

TEST(WeightStore, RejectsMisuse) {
  bmatch::WeightStore s(2);
  auto [u, w] = s.split(0);
  EXPECT_EQ(error_code([&] { s.split(0); }), "double-split");
  auto [u2, w2] = s.split(1);
  EXPECT_EQ(error_code([&] { s.merge(u, w2); }), "mismatched-views");
  EXPECT_EQ(error_code([&] { s.merge(w, u); }), "mismatched-views");
  s.merge(u, w);
  EXPECT_EQ(error_code([&] { s.merge(u, w); }), "mismatched-views");
  s.merge(u2, w2);
  EXPECT_NO_THROW(s.split(0));
}

}  // namespace
