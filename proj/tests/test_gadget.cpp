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

#include <map>
#include <random>
#include <vector>

#include "bmatch/gadget.hpp"
#include "bmatch/graph.hpp"
#include "bmatch/kernel.hpp"

namespace {

using bmatch::AugmentedComponent;
using bmatch::BMatching;
using bmatch::build_gadget_component;
using bmatch::build_graph;
using bmatch::CapacityMap;
using bmatch::Graph;
using bmatch::MuProfile;
using bmatch::Vertex;

std::int64_t cost_of(const AugmentedComponent& h, const BMatching& x) {
  const auto c = bmatch::gadget_costs(h);
  std::int64_t total = 0;
  for (std::size_t e = 0; e < x.size(); ++e) total += c[e] * x[e];
  return total;
}

void expect_module_shape(const AugmentedComponent& h) {
  for (const auto& m : h.modules) {
    EXPECT_EQ(h.b[m.u1], m.profile.c1);
    EXPECT_EQ(h.b[m.u2], m.profile.c2);
    EXPECT_EQ(h.b[m.u3], m.profile.c2);
    EXPECT_NE(h.graph.find_edge(m.u2, m.u3), bmatch::kNoEdge);
    EXPECT_EQ(h.graph.find_edge(m.u1, m.u2), bmatch::kNoEdge);
    EXPECT_EQ(h.graph.find_edge(m.u1, m.u3), bmatch::kNoEdge);
    EXPECT_EQ(h.graph.degree(m.u1), m.frontier.size());
    EXPECT_EQ(h.graph.degree(m.u2), m.frontier.size() + 1);
    for (Vertex f : m.frontier) {
      EXPECT_NE(h.graph.find_edge(m.u2, f), bmatch::kNoEdge);
      EXPECT_NE(h.graph.find_edge(m.u3, f), bmatch::kNoEdge);
    }
  }
  EXPECT_LE(h.graph.num_vertices(), 3 * h.component.num_vertices());
  EXPECT_LE(h.graph.num_edges(), 9 * h.component.num_edges() + h.component.num_vertices());
}

BMatching with_weights(const AugmentedComponent& h, std::initializer_list<std::tuple<Vertex, Vertex, std::int64_t>> w) {
  BMatching x(h.graph.num_edges(), 0);
  for (auto [a, z, v] : w) x[h.graph.find_edge(a, z)] = v;
  return x;
}

TEST(Gadget, BuildFromPathSide) {
  // Marker 0 joined to 1, which continues to 2.
  const Graph c = build_graph(3, {{0, 1}, {1, 2}});
  const auto h = build_gadget_component(c, {{0, MuProfile{1, 0, 0}}}, {0, 1, 1});
  ASSERT_EQ(h.modules.size(), 1u);
  const auto& m = h.modules[0];
  EXPECT_EQ(m.frontier, std::vector<Vertex>{1});
  EXPECT_EQ(h.b[m.u1], 0);
  EXPECT_EQ(h.b[m.u2], 0);
  EXPECT_EQ(h.graph.num_vertices(), 5);
  EXPECT_EQ(h.graph.num_edges(), 5);
  expect_module_shape(h);
}

TEST(Gadget, BuildCarriesProfileCapacities) {
  const Graph c = build_graph(3, {{0, 1}, {1, 2}});
  const auto h = build_gadget_component(c, {{0, MuProfile{1, 1, 1}}}, {0, 1, 1});
  EXPECT_EQ(h.b[h.modules[0].u1], 1);
  EXPECT_EQ(h.b[h.modules[0].u2], 1);
  EXPECT_EQ(h.b[h.modules[0].u3], 1);
  expect_module_shape(h);
}

TEST(Gadget, NoChildrenLeavesComponentUnchanged) {
  const Graph c = build_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const auto h = build_gadget_component(c, {}, {1, 2, 3}, 0);
  EXPECT_EQ(h.graph.edges(), c.edges());
  EXPECT_EQ(h.b, (CapacityMap{1, 2, 3}));
  EXPECT_TRUE(h.modules.empty());
}

TEST(Gadget, AdjacentModulesAreFullyJoined) {
  const Graph c = build_graph(3, {{0, 1}, {1, 2}});
  const auto h = build_gadget_component(c, {{0, MuProfile{0, 1, 1}}, {1, MuProfile{0, 2, 1}}}, {0, 0, 1});
  EXPECT_EQ(h.graph.num_edges(), 9 + 3 + 2);
  expect_module_shape(h);
}

TEST(Gadget, RejectsBadMarker) {
  const Graph c = build_graph(2, {{0, 1}});
  EXPECT_THROW(build_gadget_component(c, {{5, MuProfile{}}}, {1, 1}), bmatch::Error);
  EXPECT_THROW(build_gadget_component(c, {{0, MuProfile{}}}, {1, 1}, 0), bmatch::Error);
}

TEST(Normalize, RuleOneMovesWeightToU1) {
  const Graph c = build_graph(2, {{0, 1}});
  const auto h = build_gadget_component(c, {{0, MuProfile{0, 1, 1}}}, {0, 1});
  const auto& m = h.modules[0];
  bmatch::NormalizeStats st;
  const BMatching y = bmatch::normalize(h, with_weights(h, {{m.u2, 1, 1}}), &st);
  EXPECT_EQ(y, with_weights(h, {{m.u1, 1, 1}}));
  EXPECT_EQ(st.rule1, 1);
}

TEST(Normalize, RuleTwoRebalances) {
  const Graph c = build_graph(3, {{0, 1}, {0, 2}});
  const auto h = build_gadget_component(c, {{0, MuProfile{0, 0, 2}}}, {0, 1, 1});
  const auto& m = h.modules[0];
  bmatch::NormalizeStats st;
  const BMatching y = bmatch::normalize(h, with_weights(h, {{m.u2, 1, 1}, {m.u2, 2, 1}}), &st);
  const auto d = bmatch::module_degrees(y, m);
  EXPECT_EQ(d.d2, 1);
  EXPECT_EQ(d.d3, 1);
  EXPECT_EQ(st.rule2, 1);
  EXPECT_EQ(st.rule3, 0);
}

TEST(Normalize, FixpointIsUnchanged) {
  const Graph c = build_graph(3, {{0, 1}, {0, 2}});
  const auto h = build_gadget_component(c, {{0, MuProfile{0, 1, 1}}}, {0, 2, 2});
  const auto& m = h.modules[0];
  const BMatching x = with_weights(h, {{m.u1, 1, 1}, {m.u2, 1, 1}, {m.u3, 2, 1}});
  bmatch::NormalizeStats st;
  EXPECT_EQ(bmatch::normalize(h, x, &st), x);
  EXPECT_EQ(st.max_passes, 0);
}

TEST(Contract, EmptyModule) {
  const Graph c = build_graph(3, {{0, 1}, {1, 2}});
  const auto h = build_gadget_component(c, {{0, MuProfile{1, 0, 0}}}, {0, 1, 1});
  const BMatching x = with_weights(h, {{1, 2, 1}});
  const auto r = bmatch::contract_component(h, x);
  EXPECT_EQ(r.modules[0].child_demand, 0);
  EXPECT_EQ(bmatch::cardinality(r.x), 1);
}

TEST(Contract, SumsModuleWeights) {
  const Graph c = build_graph(3, {{0, 1}, {0, 2}});
  const auto h = build_gadget_component(c, {{0, MuProfile{0, 1, 1}}}, {0, 2, 1});
  const auto& m = h.modules[0];
  const BMatching x = with_weights(h, {{m.u1, 1, 1}, {m.u2, 1, 1}, {m.u3, 2, 1}});
  const auto r = bmatch::contract_component(h, x);
  EXPECT_EQ(r.modules[0].child_demand, 3);
  EXPECT_EQ(r.x[c.find_edge(0, 1)], 2);
  EXPECT_EQ(r.x[c.find_edge(0, 2)], 1);
  EXPECT_EQ(r.dropped, 0);
}

TEST(Contract, InternalWeightIsDropped) {
  // The internal unit is not frontier demand: the marker ends with degree 1.
  const Graph c = build_graph(2, {{0, 1}});
  const auto h = build_gadget_component(c, {{0, MuProfile{0, 1, 1}}}, {0, 1});
  const auto& m = h.modules[0];
  const BMatching x = with_weights(h, {{m.u1, 1, 1}, {m.u2, m.u3, 1}});
  const auto r = bmatch::contract_component(h, x);
  EXPECT_EQ(r.modules[0].child_demand, 1);
  EXPECT_EQ(r.modules[0].internal, 1);
  EXPECT_EQ(r.dropped, 1);
}

TEST(Contract, RejectsUnnormalized) {
  const Graph c = build_graph(2, {{0, 1}});
  const auto h = build_gadget_component(c, {{0, MuProfile{0, 1, 1}}}, {0, 1});
  const BMatching x = with_weights(h, {{h.modules[0].u2, 1, 1}});
  EXPECT_THROW(bmatch::contract_component(h, x), bmatch::Error);
}

struct RandomComponent {
  Graph c;
  std::map<Vertex, MuProfile> profiles;
  CapacityMap b;
  Vertex parent;
};

RandomComponent random_component(std::mt19937_64& rng) {
  const Vertex n = 3 + static_cast<Vertex>(rng() % 4);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace_back(static_cast<Vertex>(rng() % v), v);
  std::bernoulli_distribution coin(0.35);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  RandomComponent r{build_graph(n, edges), {}, CapacityMap(n), static_cast<Vertex>(rng() % (n + 1))};
  if (r.parent == n) r.parent = bmatch::kNoVertex;
  for (Vertex v = 0; v < n; ++v) {
    r.b[v] = static_cast<std::int64_t>(rng() % 4);
    if (v != r.parent && rng() % 2 == 0) {
      r.profiles[v] = MuProfile{static_cast<std::int64_t>(rng() % 3), static_cast<std::int64_t>(rng() % 4),
                                static_cast<std::int64_t>(rng() % 4)};
    }
  }
  return r;
}

void check_contraction(const AugmentedComponent& h, const BMatching& y) {
  const auto r = bmatch::contract_component(h, y);
  CapacityMap bc(h.component.num_vertices());
  for (Vertex v = 0; v < h.component.num_vertices(); ++v) bc[v] = h.b[v];
  for (std::size_t j = 0; j < h.modules.size(); ++j) {
    const auto& m = h.modules[j];
    const auto& mc = r.modules[j];
    bc[m.owner] = mc.child_demand;
    EXPECT_EQ(bmatch::x_degree(h.component, r.x, m.owner), mc.child_demand);
    EXPECT_LE(mc.c1_used, m.profile.c1);
    EXPECT_LE(mc.c2_used, m.profile.c2);
    if (mc.c2_used > 0) {
      EXPECT_EQ(mc.c1_used, m.profile.c1);
    }
    EXPECT_EQ(bmatch::mu_from_profile(m.profile, mc.child_demand),
              m.profile.mu0 + mc.c1_used + mc.c2_used);
  }
  EXPECT_TRUE(bmatch::validate_bmatching(h.component, bc, r.x)) << bmatch::validate_bmatching(h.component, bc, r.x).message;
  EXPECT_EQ(bmatch::cardinality(r.x), bmatch::cardinality(y) - r.dropped);
}

TEST(Normalize, MaxCostInputsNeedOnePassAndNoRuleThree) {
  std::mt19937_64 rng(43);
  int with_modules = 0;
  for (int iter = 0; iter < 400; ++iter) {
    const auto rc = random_component(rng);
    const auto h = build_gadget_component(rc.c, rc.profiles, rc.b, rc.parent);
    expect_module_shape(h);
    if (!h.modules.empty()) ++with_modules;
    const auto sol = bmatch::Kernel().solve_maxcost(h.graph, h.b, bmatch::gadget_costs(h));
    bmatch::NormalizeStats st;
    const BMatching y = bmatch::normalize(h, sol.x, &st);
    EXPECT_LE(st.max_passes, 1);
    EXPECT_EQ(st.rule3, 0);
    EXPECT_EQ(bmatch::cardinality(y), sol.cardinality);
    EXPECT_EQ(cost_of(h, y), sol.cost);
    EXPECT_TRUE(bmatch::validate_bmatching(h.graph, h.b, y));
    for (const auto& m : h.modules) {
      const auto d = bmatch::module_degrees(y, m);
      EXPECT_TRUE(bmatch::is_symmetric(d));
      EXPECT_TRUE(bmatch::is_saturated(d, m));
    }
    check_contraction(h, y);
  }
  EXPECT_GE(with_modules, 200);
}

TEST(Normalize, CardinalityOnlyInputsConvergeWithExtraPasses) {
  std::mt19937_64 rng(47);
  for (int iter = 0; iter < 400; ++iter) {
    const auto rc = random_component(rng);
    const auto h = build_gadget_component(rc.c, rc.profiles, rc.b, rc.parent);
    const auto sol = bmatch::Kernel().solve_bmatching(h.graph, h.b);
    const BMatching y = bmatch::normalize(h, sol.x, nullptr, {1 << 20});
    EXPECT_EQ(bmatch::cardinality(y), sol.cardinality);
    EXPECT_TRUE(bmatch::validate_bmatching(h.graph, h.b, y));
    check_contraction(h, y);
  }
}

}  // namespace
