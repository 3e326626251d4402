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

#ifndef BMATCH_GADGET_HPP_
#define BMATCH_GADGET_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "bmatch/error.hpp"
#include "bmatch/graph.hpp"
#include "bmatch/kernel.hpp"
#include "bmatch/mu_profile.hpp"

namespace bmatch {

// Three vertices standing in for a child marker: u1 with capacity c1, and the
// adjacent pair u2, u3 with capacity c2 each, all joined to the marker's
// neighbourhood.
struct GadgetModule {
  Vertex owner = kNoVertex;  // marker vertex of the component
  Vertex u1 = kNoVertex;
  Vertex u2 = kNoVertex;
  Vertex u3 = kNoVertex;
  EdgeId internal = kNoEdge;
  MuProfile profile;
  std::vector<Vertex> frontier;                      // N_H(module), ascending
  std::vector<std::array<EdgeId, 3>> frontier_edges;  // edges from u1, u2, u3
};

// H built from a component. Vertex v < |C| of H is vertex v of C (u1 for a
// child marker); the pairs u2, u3 follow at |C| + 2j and |C| + 2j + 1.
struct AugmentedComponent {
  Graph component;
  Graph graph;
  CapacityMap b;
  std::vector<GadgetModule> modules;        // ascending owner
  std::vector<int> module_of;               // H vertex -> module index or -1
  std::vector<EdgeId> to_component_edge;    // kNoEdge for u2u3
  Vertex parent_marker = kNoVertex;
};

// `b` is indexed by component vertex; entries of child markers are ignored.
inline AugmentedComponent build_gadget_component(const Graph& c,
                                                 const std::map<Vertex, MuProfile>& child_profiles,
                                                 const CapacityMap& b,
                                                 Vertex parent_marker = kNoVertex) {
  const Vertex n = c.num_vertices();
  if (static_cast<Vertex>(b.size()) != n) throw Error("capacity-range", "capacity map size mismatch");
  AugmentedComponent h;
  h.component = c;
  h.parent_marker = parent_marker;
  std::vector<int> module_at(n, -1);
  for (const auto& [owner, profile] : child_profiles) {
    if (owner < 0 || owner >= n || owner == parent_marker) {
      throw Error("vertex-range", "child marker " + std::to_string(owner) + " not in component");
    }
    GadgetModule m;
    m.owner = owner;
    m.profile = profile;
    m.u1 = owner;
    m.u2 = n + 2 * static_cast<Vertex>(h.modules.size());
    m.u3 = m.u2 + 1;
    module_at[owner] = static_cast<int>(h.modules.size());
    h.modules.push_back(std::move(m));
  }
  const Vertex total = n + 2 * static_cast<Vertex>(h.modules.size());
  h.b.assign(total, 0);
  h.module_of.assign(total, -1);
  for (Vertex v = 0; v < n; ++v) h.b[v] = b[v];
  for (std::size_t j = 0; j < h.modules.size(); ++j) {
    const GadgetModule& m = h.modules[j];
    if (m.profile.c1 < 0 || m.profile.c2 < 0) throw Error("capacity-range", "negative profile breakpoint");
    h.b[m.u1] = m.profile.c1;
    h.b[m.u2] = h.b[m.u3] = m.profile.c2;
    h.module_of[m.u1] = h.module_of[m.u2] = h.module_of[m.u3] = static_cast<int>(j);
  }

  auto copies = [&](Vertex v) -> std::vector<Vertex> {
    if (module_at[v] < 0) return {v};
    const GadgetModule& m = h.modules[module_at[v]];
    return {m.u1, m.u2, m.u3};
  };
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < c.num_edges(); ++e) {
    for (Vertex a : copies(c.edge(e).u)) {
      for (Vertex z : copies(c.edge(e).v)) {
        edges.push_back({a, z});
        h.to_component_edge.push_back(e);
      }
    }
  }
  for (GadgetModule& m : h.modules) {
    m.internal = static_cast<EdgeId>(edges.size());
    edges.push_back({m.u2, m.u3});
    h.to_component_edge.push_back(kNoEdge);
  }
  h.graph = Graph::from_unique_edges(total, std::move(edges));

  for (GadgetModule& m : h.modules) {
    for (const Incidence& inc : h.graph.incident(m.u1)) m.frontier.push_back(inc.neighbor);
    std::sort(m.frontier.begin(), m.frontier.end());
    for (Vertex f : m.frontier) {
      m.frontier_edges.push_back({h.graph.find_edge(m.u1, f), h.graph.find_edge(m.u2, f),
                                  h.graph.find_edge(m.u3, f)});
    }
  }
  return h;
}

// Cost 2 on every u2u3 edge and 1 elsewhere.
inline CostMap gadget_costs(const AugmentedComponent& h) {
  CostMap c(h.graph.num_edges(), 1);
  for (const GadgetModule& m : h.modules) c[m.internal] = 2;
  return c;
}

struct ModuleDegrees {
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  std::int64_t d3 = 0;
  std::int64_t internal = 0;
};

inline ModuleDegrees module_degrees(const BMatching& x, const GadgetModule& m) {
  ModuleDegrees d;
  d.internal = x[m.internal];
  d.d2 = d.d3 = d.internal;
  for (const auto& fe : m.frontier_edges) {
    d.d1 += x[fe[0]];
    d.d2 += x[fe[1]];
    d.d3 += x[fe[2]];
  }
  return d;
}

inline bool is_symmetric(const ModuleDegrees& d) { return d.d2 == d.d3; }

inline bool is_saturated(const ModuleDegrees& d, const GadgetModule& m) {
  return d.d1 >= m.profile.c1 || d.d2 == d.internal;
}

struct NormalizeStats {
  std::int64_t rule1 = 0;
  std::int64_t rule2 = 0;
  std::int64_t rule3 = 0;
  std::int64_t max_passes = 0;  // corrective passes on the busiest module
};

struct NormalizeOptions {
  // A maximum-cost input never needs more than one pass per module.
  std::int64_t max_passes_per_module = 2;
};

namespace detail {

// One corrective pass over module m: Rule 1 to exhaustion, then Rule 2, then
// Rule 3. Returns the H vertex whose degree Rule 3 lowered, or kNoVertex.
inline Vertex normalize_module(const GadgetModule& m, BMatching& x, NormalizeStats& st) {
  ModuleDegrees d = module_degrees(x, m);
  // Rule 1: shift frontier weight from u2/u3 onto u1 while u1 has room.
  for (std::size_t k = 0; k < m.frontier_edges.size() && d.d1 < m.profile.c1; ++k) {
    const auto& fe = m.frontier_edges[k];
    for (int side = 1; side <= 2 && d.d1 < m.profile.c1; ++side) {
      const std::int64_t amount = std::min(m.profile.c1 - d.d1, x[fe[side]]);
      if (amount == 0) continue;
      x[fe[side]] -= amount;
      x[fe[0]] += amount;
      d.d1 += amount;
      (side == 1 ? d.d2 : d.d3) -= amount;
      ++st.rule1;
    }
  }
  // Rule 2: rebalance u2 and u3 to within one unit.
  const int hi = d.d2 >= d.d3 ? 1 : 2;
  const int lo = 3 - hi;
  std::int64_t& dhi = hi == 1 ? d.d2 : d.d3;
  std::int64_t& dlo = hi == 1 ? d.d3 : d.d2;
  for (std::size_t k = 0; k < m.frontier_edges.size() && dhi > dlo + 1; ++k) {
    const auto& fe = m.frontier_edges[k];
    if (x[fe[hi]] <= x[fe[lo]]) continue;
    const std::int64_t amount = std::min((dhi - dlo) / 2, x[fe[hi]]);
    x[fe[hi]] -= amount;
    x[fe[lo]] += amount;
    dhi -= amount;
    dlo += amount;
    ++st.rule2;
  }
  // Rule 3: an odd imbalance is closed through the internal edge.
  if (dhi == dlo + 1) {
    for (std::size_t k = 0; k < m.frontier_edges.size(); ++k) {
      const auto& fe = m.frontier_edges[k];
      if (x[fe[hi]] <= x[fe[lo]]) continue;
      --x[fe[hi]];
      ++x[m.internal];
      ++st.rule3;
      return m.frontier[k];
    }
    throw Error("internal", "rule 3 found no frontier edge");
  }
  return kNoVertex;
}

}  // namespace detail

// No module can need more passes than this: each requeue follows a Rule 3
// step, and each Rule 3 step adds a unit to an internal edge capped by c2.
inline std::int64_t rule3_pass_bound(const AugmentedComponent& h) {
  std::int64_t bound = 1;
  for (const GadgetModule& m : h.modules) bound += m.profile.c2;
  return bound;
}

// Restores symmetry and saturation on every module without changing the
// cardinality. Rules 1 and 2 keep every frontier degree; Rule 3 lowers one,
// which can only disturb a neighbouring module, so that module is queued
// again. A maximum-cost input never reaches Rule 3.
inline BMatching normalize(const AugmentedComponent& h, BMatching x, NormalizeStats* stats = nullptr,
                           NormalizeOptions options = {}) {
  if (static_cast<EdgeId>(x.size()) != h.graph.num_edges()) {
    throw Error("matching-size", "matching does not fit the gadget graph");
  }
  NormalizeStats st;
  std::vector<std::int64_t> passes(h.modules.size(), 0);
  std::vector<char> queued(h.modules.size(), 1);
  std::deque<int> queue;
  for (int j = 0; j < static_cast<int>(h.modules.size()); ++j) queue.push_back(j);
  while (!queue.empty()) {
    const int j = queue.front();
    queue.pop_front();
    queued[j] = 0;
    const GadgetModule& m = h.modules[j];
    const ModuleDegrees d = module_degrees(x, m);
    if (is_symmetric(d) && is_saturated(d, m)) continue;
    if (++passes[j] > options.max_passes_per_module) {
      throw Error("not-cost-maximal", "module at marker " + std::to_string(m.owner) +
                                          " needed more than " +
                                          std::to_string(options.max_passes_per_module) + " passes");
    }
    st.max_passes = std::max(st.max_passes, passes[j]);
    const Vertex touched = detail::normalize_module(m, x, st);
    if (touched != kNoVertex) {
      const int other = h.module_of[touched];
      if (other >= 0 && !queued[other]) {
        queued[other] = 1;
        queue.push_back(other);
      }
    }
  }
  if (stats) *stats = st;
  return x;
}

struct ModuleContraction {
  std::int64_t child_demand = 0;  // c1' + 2 c2'
  std::int64_t c1_used = 0;
  std::int64_t c2_used = 0;
  std::int64_t internal = 0;  // cardinality lost by the contraction
};

inline ModuleContraction contract_module(const AugmentedComponent& h, const BMatching& x,
                                         const GadgetModule& m) {
  if (static_cast<EdgeId>(x.size()) != h.graph.num_edges()) {
    throw Error("matching-size", "matching does not fit the gadget graph");
  }
  const ModuleDegrees d = module_degrees(x, m);
  if (!is_symmetric(d) || !is_saturated(d, m)) {
    throw Error("not-normalized", "module at marker " + std::to_string(m.owner) +
                                      " violates symmetry or saturation");
  }
  ModuleContraction r;
  r.c1_used = d.d1;
  r.c2_used = d.d2 - d.internal;
  r.internal = d.internal;
  r.child_demand = r.c1_used + 2 * r.c2_used;
  return r;
}

struct ContractedComponent {
  BMatching x;                              // over the component's edges
  std::vector<ModuleContraction> modules;   // parallel to h.modules
  std::int64_t dropped = 0;
};

// Folds every module back into its marker: x_{v,u} = x_{v,u1} + x_{v,u2} +
// x_{v,u3}, and u2u3 weight disappears.
inline ContractedComponent contract_component(const AugmentedComponent& h, const BMatching& x) {
  ContractedComponent r;
  r.x.assign(h.component.num_edges(), 0);
  for (EdgeId e = 0; e < h.graph.num_edges(); ++e) {
    if (h.to_component_edge[e] != kNoEdge) r.x[h.to_component_edge[e]] += x[e];
  }
  for (const GadgetModule& m : h.modules) {
    r.modules.push_back(contract_module(h, x, m));
    r.dropped += r.modules.back().internal;
  }
  return r;
}

}  // namespace bmatch

#endif  // BMATCH_GADGET_HPP_
