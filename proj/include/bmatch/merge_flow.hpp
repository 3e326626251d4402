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

#ifndef BMATCH_MERGE_FLOW_HPP_
#define BMATCH_MERGE_FLOW_HPP_

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "bmatch/error.hpp"
#include "bmatch/graph.hpp"
#include "bmatch/split_decomp.hpp"
#include "bmatch/weight_store.hpp"

namespace bmatch {

// G_U = G[U] plus marker w joined to C, and G_W = G[W] plus marker u joined
// to D. Markers take the last local id on their side.
struct SplitSides {
  Graph gu;
  std::vector<Vertex> u_vertices;  // local id -> vertex of G
  Vertex w = kNoVertex;
  std::vector<EdgeId> gu_edges;    // local edge -> edge of G, kNoEdge on marker edges
  Graph gw;
  std::vector<Vertex> w_vertices;
  Vertex u = kNoVertex;
  std::vector<EdgeId> gw_edges;
};

namespace detail {

inline void build_side(const Graph& g, const std::vector<Vertex>& side, const std::vector<Vertex>& frontier,
                       Graph& out, std::vector<Vertex>& vertices, Vertex& marker,
                       std::vector<EdgeId>& edge_map) {
  std::vector<Vertex> local(g.num_vertices(), kNoVertex);
  vertices = side;
  std::sort(vertices.begin(), vertices.end());
  for (Vertex i = 0; i < static_cast<Vertex>(vertices.size()); ++i) local[vertices[i]] = i;
  marker = static_cast<Vertex>(vertices.size());
  std::vector<Edge> edges;
  edge_map.clear();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (local[ed.u] != kNoVertex && local[ed.v] != kNoVertex) {
      edges.push_back({local[ed.u], local[ed.v]});
      edge_map.push_back(e);
    }
  }
  for (Vertex v : frontier) {
    edges.push_back({local[v], marker});
    edge_map.push_back(kNoEdge);
  }
  out = Graph::from_unique_edges(marker + 1, std::move(edges));
}

}  // namespace detail

inline SplitSides split_sides(const Graph& g, const Split& s) {
  SplitSides r;
  detail::build_side(g, s.U, s.C, r.gu, r.u_vertices, r.w, r.gu_edges);
  detail::build_side(g, s.W, s.D, r.gw, r.w_vertices, r.u, r.gw_edges);
  return r;
}

struct Supply {
  Vertex vertex = kNoVertex;
  std::int64_t amount = 0;
};

// Pairs two supply lists of equal total in list order; each step exhausts at
// least one entry, so there are fewer than |c| + |d| steps.
template <typename Emit>
void greedy_pairing(const std::vector<Supply>& c, const std::vector<Supply>& d, Emit&& emit) {
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t left_c = c.empty() ? 0 : c[0].amount;
  std::int64_t left_d = d.empty() ? 0 : d[0].amount;
  while (i < c.size() && j < d.size()) {
    if (left_c == 0) {
      if (++i < c.size()) left_c = c[i].amount;
      continue;
    }
    if (left_d == 0) {
      if (++j < d.size()) left_d = d[j].amount;
      continue;
    }
    const std::int64_t amount = std::min(left_c, left_d);
    emit(c[i].vertex, d[j].vertex, amount);
    left_c -= amount;
    left_d -= amount;
  }
}

struct MergeStats {
  std::int64_t d = 0;
  bool pendant = false;
  std::int64_t pairs = 0;  // cross weights created
  std::int64_t work = 0;   // supplies scanned
};

struct MergeContext {
  const Graph& g;
  const Split& split;
  const SplitSides& sides;
  const BMatching& xu;  // over sides.gu
  const BMatching& xw;  // over sides.gw
};

// Both side solutions are written into one store split at a shared slot
// holding the marker degree; after the merge, marker weight is routed across
// C x D, which the split makes a complete join.
inline BMatching merge_across_split(const MergeContext& ctx, MergeStats* stats = nullptr) {
  const Graph& g = ctx.g;
  const SplitSides& s = ctx.sides;
  if (static_cast<EdgeId>(ctx.xu.size()) != s.gu.num_edges() ||
      static_cast<EdgeId>(ctx.xw.size()) != s.gw.num_edges()) {
    throw Error("matching-size", "side solution does not fit its side graph");
  }
  const EdgeId shared = g.num_edges();
  WeightStore store(shared + 1);
  auto [view_u, view_w] = store.split(shared);

  auto load = [&](const Graph& side, const std::vector<Vertex>& vertices, Vertex marker,
                  const std::vector<EdgeId>& edge_map, const BMatching& x, const StoreView& view) {
    std::vector<Supply> supply;
    std::int64_t degree = 0;
    for (EdgeId e = 0; e < side.num_edges(); ++e) {
      if (edge_map[e] != kNoEdge) {
        view.set(edge_map[e], x[e]);
      } else if (x[e] > 0) {
        supply.push_back({vertices[side.edge(e).other(marker)], x[e]});
        degree += x[e];
      }
    }
    view.set(shared, degree);
    std::sort(supply.begin(), supply.end(), [](const Supply& a, const Supply& b) { return a.vertex < b.vertex; });
    return supply;
  };
  const std::vector<Supply> c = load(s.gu, s.u_vertices, s.w, s.gu_edges, ctx.xu, view_u);
  const std::vector<Supply> d = load(s.gw, s.w_vertices, s.u, s.gw_edges, ctx.xw, view_w);
  const std::int64_t du = view_u.get(shared);
  const std::int64_t dw = view_w.get(shared);
  if (du != dw) {
    throw Error("marker-degree", "marker degrees differ: " + std::to_string(du) + " vs " + std::to_string(dw));
  }
  store.merge(view_u, view_w);
  store.set(shared, 0);

  MergeStats st;
  st.d = du;
  st.work = static_cast<std::int64_t>(c.size() + d.size());
  auto route = [&](Vertex a, Vertex b, std::int64_t amount) {
    const EdgeId e = g.find_edge(a, b);
    if (e == kNoEdge) throw Error("not-a-split", "frontier pair {" + std::to_string(a) + "," + std::to_string(b) + "} is not an edge");
    store.add(e, amount);
    ++st.pairs;
  };
  if (ctx.split.C.size() == 1 || ctx.split.D.size() == 1) {
    // A pendant marker edge: its weight moves onto the edges of the lone
    // frontier vertex.
    st.pendant = true;
    if (ctx.split.C.size() == 1) {
      for (const Supply& sd : d) route(ctx.split.C[0], sd.vertex, sd.amount);
    } else {
      for (const Supply& sc : c) route(sc.vertex, ctx.split.D[0], sc.amount);
    }
  } else {
    greedy_pairing(c, d, route);
  }
  if (stats) *stats = st;
  BMatching x = store.snapshot();
  x.pop_back();
  return x;
}

// The same routing on a multigraph over split-tree labels. Entries between
// labels are added once per component solution; eliminating a mated marker
// pair replaces every entry at either marker by cross entries, so the entry
// count never grows.
class LabelMerger {
 public:
  explicit LabelMerger(Vertex num_labels) : incident_(static_cast<std::size_t>(num_labels)) {}

  void add(Vertex a, Vertex b, std::int64_t weight) {
    if (weight <= 0) return;
    const int id = static_cast<int>(entries_.size());
    entries_.push_back({a, b, weight, true});
    incident_[a].push_back(id);
    incident_[b].push_back(id);
    total_ += weight;
  }

  std::int64_t total() const { return total_; }

  std::int64_t degree(Vertex label) const {
    std::int64_t d = 0;
    for (int id : incident_[label]) {
      if (entries_[id].alive) d += entries_[id].weight;
    }
    return d;
  }

  MergeStats eliminate(Vertex u, Vertex w) {
    MergeStats st;
    const std::vector<Supply> c = take(u, st.work);
    const std::vector<Supply> d = take(w, st.work);
    std::int64_t du = 0;
    std::int64_t dw = 0;
    for (const Supply& s : c) du += s.amount;
    for (const Supply& s : d) dw += s.amount;
    if (du != dw) {
      throw Error("marker-degree", "marker degrees differ: " + std::to_string(du) + " vs " + std::to_string(dw));
    }
    st.d = du;
    st.pendant = c.size() == 1 || d.size() == 1;
    total_ -= du + dw;
    greedy_pairing(c, d, [&](Vertex a, Vertex b, std::int64_t amount) {
      add(a, b, amount);
      ++st.pairs;
    });
    return st;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& e : entries_) {
      if (e.alive) f(e.a, e.b, e.weight);
    }
  }

 private:
  struct Entry {
    Vertex a;
    Vertex b;
    std::int64_t weight;
    bool alive;
  };

  // Removes the entries at `marker`, aggregated per opposite label.
  std::vector<Supply> take(Vertex marker, std::int64_t& work) {
    std::vector<Supply> out;
    for (int id : incident_[marker]) {
      Entry& e = entries_[id];
      ++work;
      if (!e.alive) continue;
      e.alive = false;
      out.push_back({e.a == marker ? e.b : e.a, e.weight});
    }
    incident_[marker].clear();
    incident_[marker].shrink_to_fit();
    std::sort(out.begin(), out.end(), [](const Supply& a, const Supply& b) { return a.vertex < b.vertex; });
    std::size_t k = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (k > 0 && out[k - 1].vertex == out[i].vertex) {
        out[k - 1].amount += out[i].amount;
      } else {
        out[k++] = out[i];
      }
    }
    out.resize(k);
    return out;
  }

  std::vector<Entry> entries_;
  std::vector<std::vector<int>> incident_;
  std::int64_t total_ = 0;
};

}  // namespace bmatch

#endif  // BMATCH_MERGE_FLOW_HPP_
