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

#ifndef BMATCH_SOLVER_HPP_
#define BMATCH_SOLVER_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bmatch/error.hpp"
#include "bmatch/gadget.hpp"
#include "bmatch/graph.hpp"
#include "bmatch/kernel.hpp"
#include "bmatch/merge_flow.hpp"
#include "bmatch/mu_profile.hpp"
#include "bmatch/split_decomp.hpp"

namespace bmatch {

enum class SolveMode { kAuto, kKernel, kSplitDp };

// How phase 2 obtains a normalised solution on each H_i. kMaxCost is the
// literal route (max-cost kernel, then at most one pass per module);
// kCardinalityFirst starts from the cardinality kernel and lets Rule 3 run
// to a fixpoint, falling back to kMaxCost past `fallback_passes`.
enum class Phase2Route { kCardinalityFirst, kMaxCost };

// Phase-1 kernel calls stay below kPhase1Beta * sc(G) * log2(||b||_1 + 2).
inline constexpr std::int64_t kPhase1Beta = 16;

// Greedy merge work stays below kMergeAlpha * (n + m).
inline constexpr std::int64_t kMergeAlpha = 4;

struct SolverConfig {
  SolveMode mode = SolveMode::kAuto;
  Phase2Route phase2 = Phase2Route::kCardinalityFirst;
  std::int64_t fallback_passes = 64;
  KernelConfig kernel;
  bool record_merges = false;
  bool record_components = false;
};

// parent_side + child_side - d must equal merged.
struct MergeRecord {
  std::int64_t parent_side = 0;
  std::int64_t child_side = 0;
  std::int64_t d = 0;
  std::int64_t merged = 0;
};

struct ComponentRecord {
  Vertex order = 0;
  EdgeId edges = 0;
  Vertex h_vertices = 0;
  EdgeId h_edges = 0;
  MuProfile profile;    // of G_i with respect to w_i
  MuProfile h_profile;  // of H_i with respect to w_i
  std::int64_t demand = 0;
  std::int64_t phase1_calls = 0;
};

struct SolveStats {
  std::string path;  // "kernel" or "splitdp"
  std::int64_t kernel_calls_phase1 = 0;
  std::int64_t kernel_calls_phase2 = 0;
  std::int64_t kernel_calls_direct = 0;
  double decompose_ms = 0;
  double phase1_ms = 0;
  double phase2_ms = 0;
  double merge_ms = 0;
  std::int64_t components = 0;
  Vertex split_width = 0;
  Vertex max_component_order = 0;
  bool h_bounds_ok = true;  // |V(H_i)| <= 3|V(C_i)| and |E(H_i)| <= 9|E(C_i)| + |V(C_i)|
  std::int64_t merges = 0;
  std::int64_t merge_work = 0;
  std::int64_t normalize_rule3 = 0;
  std::int64_t maxcost_fallbacks = 0;
  std::int64_t long_normalizations = 0;  // fixpoint runs past fallback_passes
  std::int64_t max_normalize_passes = 0;
  std::vector<MergeRecord> merge_records;
  std::vector<ComponentRecord> component_records;

  void absorb(const SolveStats& o) {
    kernel_calls_phase1 += o.kernel_calls_phase1;
    kernel_calls_phase2 += o.kernel_calls_phase2;
    kernel_calls_direct += o.kernel_calls_direct;
    decompose_ms += o.decompose_ms;
    phase1_ms += o.phase1_ms;
    phase2_ms += o.phase2_ms;
    merge_ms += o.merge_ms;
    components += o.components;
    split_width = std::max(split_width, o.split_width);
    max_component_order = std::max(max_component_order, o.max_component_order);
    h_bounds_ok = h_bounds_ok && o.h_bounds_ok;
    merges += o.merges;
    merge_work += o.merge_work;
    normalize_rule3 += o.normalize_rule3;
    maxcost_fallbacks += o.maxcost_fallbacks;
    long_normalizations += o.long_normalizations;
    max_normalize_passes = std::max(max_normalize_passes, o.max_normalize_passes);
    merge_records.insert(merge_records.end(), o.merge_records.begin(), o.merge_records.end());
    component_records.insert(component_records.end(), o.component_records.begin(),
                             o.component_records.end());
    if (path.empty() || path == o.path) {
      path = o.path;
    } else {
      path = "mixed";
    }
  }
};

struct SolveResult {
  std::int64_t cardinality = 0;
  BMatching matching;
  SolveStats stats;
};

inline double log2_budget(std::int64_t total) { return std::log2(static_cast<double>(total) + 2.0); }

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

class TreeSolver {
 public:
  TreeSolver(const Graph& g, const CapacityMap& b, const SolverConfig& cfg, SolveStats& stats)
      : g_(g), b_(b), cfg_(cfg), stats_(stats), kernel_(cfg.kernel) {}

  BMatching run(const SplitTree& t) {
    t_ = &t;
    const std::size_t s = t.components.size();
    hs_.resize(s);
    h_profile_.resize(s);
    profile_.resize(s);
    wlocal_.resize(s);
    demand_.assign(s, 0);
    if (cfg_.record_components) records_.resize(s);
    auto t0 = std::chrono::steady_clock::now();
    for (auto it = t.preorder.rbegin(); it != t.preorder.rend(); ++it) phase1(*it);
    stats_.kernel_calls_phase1 += kernel_.calls();
    stats_.phase1_ms += elapsed_ms(t0);

    kernel_.reset_calls();
    t0 = std::chrono::steady_clock::now();
    LabelMerger merger(t.num_original + t.num_markers());
    std::vector<std::int64_t> acc(s, 0);
    for (int i : t.preorder) acc[i] = phase2(i, merger);
    stats_.kernel_calls_phase2 += kernel_.calls();
    stats_.phase2_ms += elapsed_ms(t0);

    t0 = std::chrono::steady_clock::now();
    for (auto it = t.preorder.rbegin(); it != t.preorder.rend(); ++it) {
      const int i = *it;
      if (t.parent_edge[i] < 0) continue;
      const TreeEdge& te = t.edges[t.parent_edge[i]];
      const std::int64_t before = merger.total();
      const MergeStats ms = merger.eliminate(te.parent_marker, te.child_marker);
      MergeRecord rec{acc[te.parent], acc[i], ms.d, 0};
      rec.merged = rec.parent_side + rec.child_side + (merger.total() - before);
      if (rec.merged != rec.parent_side + rec.child_side - rec.d) {
        throw Error("internal", "merge identity violated");
      }
      acc[te.parent] = rec.merged;
      ++stats_.merges;
      stats_.merge_work += ms.work;
      if (cfg_.record_merges) stats_.merge_records.push_back(rec);
    }
    BMatching x(g_.num_edges(), 0);
    merger.for_each([&](Vertex a, Vertex z, std::int64_t w) {
      const EdgeId e = (t.is_marker(a) || t.is_marker(z)) ? kNoEdge : g_.find_edge(a, z);
      if (e == kNoEdge) throw Error("internal", "merged weight on a non-edge");
      x[e] += w;
    });
    stats_.merge_ms += elapsed_ms(t0);
    if (cardinality(x) != profile_[t.root].mu0) {
      throw Error("internal", "reconstruction misses the phase-1 optimum");
    }
    for (auto& r : records_) stats_.component_records.push_back(r);
    return x;
  }

 private:
  void phase1(int i) {
    const SplitTree& t = *t_;
    const Component& comp = t.components[i];
    Graph c = comp.graph;
    if (t.parent_edge[i] < 0) {
      // The root gets an isolated dummy marker so every component has one.
      c = Graph::from_unique_edges(comp.order() + 1, comp.graph.edges());
      wlocal_[i] = comp.order();
    } else {
      wlocal_[i] = comp.local(t.edges[t.parent_edge[i]].child_marker);
    }
    CapacityMap bl(c.num_vertices(), 0);
    for (Vertex v = 0; v < comp.order(); ++v) {
      if (!t.is_marker(comp.labels[v])) bl[v] = b_[comp.labels[v]];
    }
    std::map<Vertex, MuProfile> children;
    std::int64_t mu0 = 0;
    for (int ce : t.child_edges[i]) {
      const TreeEdge& te = t.edges[ce];
      children[comp.local(te.parent_marker)] = profile_[te.child];
      mu0 += profile_[te.child].mu0 - profile_[te.child].c2;
    }
    hs_[i] = build_gadget_component(c, children, bl, wlocal_[i]);
    const AugmentedComponent& h = hs_[i];
    const std::int64_t calls = kernel_.calls();
    h_profile_[i] = compute_profile(h.graph, h.b, wlocal_[i], kernel_);
    profile_[i] = {h_profile_[i].mu0 + mu0, h_profile_[i].c1, h_profile_[i].c2};

    if (h.graph.num_vertices() > 3 * c.num_vertices() ||
        h.graph.num_edges() > 9 * c.num_edges() + c.num_vertices()) {
      stats_.h_bounds_ok = false;
    }
    stats_.max_component_order = std::max(stats_.max_component_order, comp.order());
    if (cfg_.record_components) {
      ComponentRecord& r = records_[i];
      r.order = comp.order();
      r.edges = comp.graph.num_edges();
      r.h_vertices = h.graph.num_vertices();
      r.h_edges = h.graph.num_edges();
      r.profile = profile_[i];
      r.h_profile = h_profile_[i];
      r.phase1_calls = kernel_.calls() - calls;
    }
  }

  BMatching normalized_solution(const AugmentedComponent& h, const CapacityMap& b) {
    NormalizeStats ns;
    BMatching y;
    if (cfg_.phase2 == Phase2Route::kCardinalityFirst) {
      const BMatching x = kernel_.solve_bmatching(h.graph, b).x;
      try {
        y = normalize(h, x, &ns, {cfg_.fallback_passes});
      } catch (const Error& e) {
        if (e.code() != "not-cost-maximal") throw;
        if (kernel_.maxcost_fits(h.graph, b)) {
          ++stats_.maxcost_fallbacks;
          y = normalize(h, kernel_.solve_maxcost(h.graph, b, gadget_costs(h)).x, &ns);
        } else {
          // Too large for the max-cost kernel. Every Rule 3 step adds a unit
          // to an internal edge, so the fixpoint ends within the c2 total.
          ++stats_.long_normalizations;
          y = normalize(h, x, &ns, {rule3_pass_bound(h)});
        }
      }
    } else {
      y = normalize(h, kernel_.solve_maxcost(h.graph, b, gadget_costs(h)).x, &ns);
    }
    stats_.normalize_rule3 += ns.rule3;
    stats_.max_normalize_passes = std::max(stats_.max_normalize_passes, ns.max_passes);
    return y;
  }

  std::int64_t phase2(int i, LabelMerger& merger) {
    const SplitTree& t = *t_;
    const Component& comp = t.components[i];
    const AugmentedComponent& h = hs_[i];
    CapacityMap b = h.b;
    b[wlocal_[i]] = demand_[i];
    const BMatching y = normalized_solution(h, b);
    if (cardinality(y) != mu_from_profile(h_profile_[i], demand_[i])) {
      throw Error("internal", "component solution disagrees with its profile");
    }
    const ContractedComponent cc = contract_component(h, y);
    if (x_degree(h.component, cc.x, wlocal_[i]) != demand_[i]) {
      throw Error("internal", "imposed demand not saturated");
    }
    for (std::size_t j = 0; j < h.modules.size(); ++j) {
      const Vertex owner_label = comp.labels[h.modules[j].owner];
      demand_[t.component_of(t.mate(owner_label))] = cc.modules[j].child_demand;
    }
    for (EdgeId e = 0; e < comp.graph.num_edges(); ++e) {
      const Edge& ed = comp.graph.edge(e);
      merger.add(comp.labels[ed.u], comp.labels[ed.v], cc.x[e]);
    }
    if (cfg_.record_components) records_[i].demand = demand_[i];
    return cardinality(cc.x);
  }

  const Graph& g_;
  const CapacityMap& b_;
  const SolverConfig& cfg_;
  SolveStats& stats_;
  Kernel kernel_;
  const SplitTree* t_ = nullptr;
  std::vector<AugmentedComponent> hs_;
  std::vector<MuProfile> h_profile_;
  std::vector<MuProfile> profile_;
  std::vector<Vertex> wlocal_;
  std::vector<std::int64_t> demand_;
  std::vector<ComponentRecord> records_;
};

inline SolveResult solve_connected(const Graph& g, const CapacityMap& b, const SolverConfig& cfg) {
  SolveResult r;
  auto direct = [&](const char* path) {
    Kernel kernel(cfg.kernel);
    r.matching = kernel.solve_bmatching(g, b).x;
    r.stats.kernel_calls_direct = kernel.calls();
    r.stats.path = path;
    r.stats.components = 1;
    r.stats.max_component_order = g.num_vertices();
  };
  if (cfg.mode == SolveMode::kKernel || g.num_vertices() < 4) {
    direct("kernel");
  } else {
    auto t0 = std::chrono::steady_clock::now();
    const SplitTree t = decompose_minimal(g);
    r.stats.decompose_ms = elapsed_ms(t0);
    r.stats.split_width = split_width(t);
    if (t.components.size() == 1) {
      const double ms = r.stats.decompose_ms;
      const Vertex k = r.stats.split_width;
      direct("kernel");
      r.stats.decompose_ms = ms;
      r.stats.split_width = k;
    } else {
      r.stats.path = "splitdp";
      r.stats.components = static_cast<std::int64_t>(t.components.size());
      r.matching = TreeSolver(g, b, cfg, r.stats).run(t);
    }
  }
  r.cardinality = cardinality(r.matching);
  return r;
}

}  // namespace detail

// Maximum-cardinality b-matching. Connected inputs of order >= 4 go through
// the split decomposition unless the kernel mode is forced; each connected
// component of a disconnected input is solved on its own.
inline SolveResult solve_bmatching(const Graph& g, const CapacityMap& b, const SolverConfig& cfg = {}) {
  if (static_cast<Vertex>(b.size()) != g.num_vertices()) {
    throw Error("capacity-range", "capacity map size differs from vertex count");
  }
  total_capacity(b);
  Vertex count = 0;
  const std::vector<Vertex> comp = connected_components(g, &count);
  if (count <= 1) {
    SolveResult r = detail::solve_connected(g, b, cfg);
    if (!validate_bmatching(g, b, r.matching)) throw Error("internal", "solver produced an invalid matching");
    return r;
  }
  std::vector<std::vector<Vertex>> members(count);
  for (Vertex v = 0; v < g.num_vertices(); ++v) members[comp[v]].push_back(v);
  SolveResult r;
  r.matching.assign(g.num_edges(), 0);
  for (const auto& vs : members) {
    if (vs.size() < 2) continue;
    const Subgraph sub = induced_subgraph(g, vs);
    CapacityMap sb(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) sb[i] = b[vs[i]];
    const SolveResult part = detail::solve_connected(sub.graph, sb, cfg);
    for (EdgeId e = 0; e < sub.graph.num_edges(); ++e) r.matching[sub.edge_to_parent[e]] = part.matching[e];
    r.stats.absorb(part.stats);
  }
  r.cardinality = cardinality(r.matching);
  if (!validate_bmatching(g, b, r.matching)) throw Error("internal", "solver produced an invalid matching");
  return r;
}

inline SolveResult solve_maximum_matching(const Graph& g, const SolverConfig& cfg = {}) {
  return solve_bmatching(g, CapacityMap(g.num_vertices(), 1), cfg);
}

}  // namespace bmatch

#endif  // BMATCH_SOLVER_HPP_
