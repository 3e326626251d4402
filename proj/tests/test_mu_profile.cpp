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
#include "bmatch/mu_profile.hpp"
#include "bmatch/oracle.hpp"

namespace {

using bmatch::build_graph;
using bmatch::CapacityMap;
using bmatch::compute_profile;
using bmatch::Graph;
using bmatch::mu_at;
using bmatch::mu_from_profile;
using bmatch::MuProfile;
using bmatch::Vertex;

struct Case {
  Graph g;
  CapacityMap b;
  Vertex w;
};

Case random_case(std::mt19937_64& rng, std::int64_t max_b) {
  const Vertex n = 2 + static_cast<Vertex>(rng() % 6);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  CapacityMap b(n);
  for (auto& c : b) c = static_cast<std::int64_t>(rng() % (max_b + 1));
  return {build_graph(n, edges), b, static_cast<Vertex>(rng() % n)};
}

// μ(t) for t = 0..hi from the expansion oracle, independent of the kernel.
std::vector<std::int64_t> oracle_sweep(const Case& c, std::int64_t hi) {
  std::vector<std::int64_t> mu;
  for (std::int64_t t = 0; t <= hi; ++t) {
    CapacityMap bt = c.b;
    bt[c.w] = t;
    mu.push_back(bmatch::oracle_bmatching(c.g, bt, 2000).cardinality);
  }
  return mu;
}

TEST(MuFromProfile, ClosedForm) {
  const MuProfile p{1, 1, 1};
  const std::int64_t expected[] = {1, 2, 2, 3};
  for (int t = 0; t < 4; ++t) EXPECT_EQ(mu_from_profile(p, t), expected[t]);
  EXPECT_EQ(mu_from_profile(p, 9), 3);
  EXPECT_EQ(mu_from_profile(MuProfile{0, 2, 0}, 5), 2);
  EXPECT_EQ(mu_from_profile(MuProfile{7, 3, 4}, 0), 7);
}

TEST(MuAt, IsolatedDistinguishedVertex) {
  const Graph g = build_graph(3, {{1, 2}});
  for (std::int64_t t = 0; t < 5; ++t) EXPECT_EQ(mu_at(g, {0, 1, 1}, 0, t), 1);
  EXPECT_EQ(compute_profile(g, {0, 1, 1}, 0), (MuProfile{1, 0, 0}));
}

TEST(MuAt, Star) {
  const Graph g = build_graph(3, {{0, 1}, {0, 2}});
  const CapacityMap b{0, 1, 1};
  const std::int64_t expected[] = {0, 1, 2, 2};
  for (int t = 0; t < 4; ++t) EXPECT_EQ(mu_at(g, b, 0, t), expected[t]);
  EXPECT_EQ(compute_profile(g, b, 0), (MuProfile{0, 2, 0}));
}

TEST(MuAt, TriangleWithAntenna) {
  const Graph g = build_graph(3, {{0, 1}, {0, 2}, {1, 2}});
  const CapacityMap b{0, 1, 1};
  const std::int64_t expected[] = {1, 1, 2, 2};
  for (int t = 0; t < 4; ++t) EXPECT_EQ(mu_at(g, b, 0, t), expected[t]);
  EXPECT_EQ(compute_profile(g, b, 0), (MuProfile{1, 0, 1}));
}

TEST(MuAt, RejectsNegativeCapacity) {
  const Graph g = build_graph(2, {{0, 1}});
  EXPECT_THROW(mu_at(g, {1, 1}, 0, -1), bmatch::Error);
  EXPECT_THROW(mu_from_profile(MuProfile{}, -1), bmatch::Error);
}

TEST(MuSweep, IncrementLaws) {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 300; ++iter) {
    const Case c = random_case(rng, 4);
    const std::int64_t hi = bmatch::total_capacity(c.b) + 4;
    const auto mu = oracle_sweep(c, hi);
    for (std::int64_t t = 0; t + 1 <= hi; ++t) {
      ASSERT_GE(mu[t + 1] - mu[t], 0) << "iter " << iter << " t " << t;
      ASSERT_LE(mu[t + 1] - mu[t], 1) << "iter " << iter << " t " << t;
    }
    for (std::int64_t t = 0; t + 2 <= hi; ++t) {
      if (mu[t + 2] != mu[t]) continue;
      for (std::int64_t s = t; s <= hi; ++s) ASSERT_EQ(mu[s], mu[t]) << "iter " << iter << " t " << t;
    }
    for (std::int64_t t = 0; t + 3 <= hi; ++t) {
      if (mu[t + 1] == mu[t]) {
        ASSERT_EQ(mu[t + 3], mu[t + 2]) << "iter " << iter << " t " << t;
      }
    }
  }
}

TEST(MuProfile, FaithfulToOracleSweep) {
  std::mt19937_64 rng(37);
  for (int iter = 0; iter < 300; ++iter) {
    const Case c = random_case(rng, 4);
    const std::int64_t hi = bmatch::total_capacity(c.b) + 4;
    const auto mu = oracle_sweep(c, hi);
    bmatch::Kernel kernel;
    const MuProfile p = compute_profile(c.g, c.b, c.w, kernel);
    std::int64_t nbr = 0;
    for (const auto& inc : c.g.incident(c.w)) nbr += c.b[inc.neighbor];
    EXPECT_LE(p.c1 + 2 * p.c2, nbr);
    for (std::int64_t t = 0; t <= hi; ++t) {
      ASSERT_EQ(mu_from_profile(p, t), mu[t]) << "iter " << iter << " t " << t;
    }
    EXPECT_LE(kernel.calls(), bmatch::profile_call_bound(bmatch::total_capacity(c.b)));
  }
}

TEST(MuProfile, CallBoundWithLargeCapacities) {
  std::mt19937_64 rng(41);
  for (int iter = 0; iter < 200; ++iter) {
    Case c = random_case(rng, 1000);
    bmatch::Kernel kernel;
    const MuProfile p = compute_profile(c.g, c.b, c.w, kernel);
    ASSERT_LE(kernel.calls(), bmatch::profile_call_bound(bmatch::total_capacity(c.b))) << iter;
    // Spot-check the profile at the breakpoints and just past them.
    for (std::int64_t t : {std::int64_t{0}, p.c1, p.c1 + 1, p.c1 + 2 * p.c2, p.c1 + 2 * p.c2 + 1,
                           p.c1 + 2 * p.c2 + 5}) {
      ASSERT_EQ(mu_from_profile(p, t), mu_at(c.g, c.b, c.w, t)) << "iter " << iter << " t " << t;
    }
  }
}

}  // namespace
