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

#ifndef BMATCH_SPLIT_DECOMP_HPP_
#define BMATCH_SPLIT_DECOMP_HPP_

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bmatch/error.hpp"
#include "bmatch/graph.hpp"

namespace bmatch {

// A join that is also an edge cut: every edge between U and W runs between
// C = N(W) ∩ U and D = N(U) ∩ W, and all of C × D is present.
struct Split {
  std::vector<Vertex> U;
  std::vector<Vertex> W;
  std::vector<Vertex> C;
  std::vector<Vertex> D;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Fills C and D for the bipartition given by side[v] (1 = U) and checks the
// split conditions exactly.
inline bool check_split(const Graph& g, const std::vector<char>& side, Split& out) {
  out = Split{};
  std::vector<char> frontier(g.num_vertices(), 0);
  std::int64_t crossing = 0;
  for (const Edge& e : g.edges()) {
    if (side[e.u] == side[e.v]) continue;
    ++crossing;
    frontier[e.u] = 1;
    frontier[e.v] = 1;
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    (side[v] ? out.U : out.W).push_back(v);
    if (frontier[v]) (side[v] ? out.C : out.D).push_back(v);
  }
  return out.U.size() >= 2 && out.W.size() >= 2 && crossing > 0 &&
         crossing == static_cast<std::int64_t>(out.C.size()) * static_cast<std::int64_t>(out.D.size());
}

// Searches for a split with r0 and y on the same side and d on the other
// side's frontier. Starting from U = {r0, y}, any vertex outside U whose
// (nonempty) trace on U differs from d's trace must join U; if the closure
// leaves at least two vertices outside, it is a split. Trying every y and
// every d adjacent to r0 or y finds a split whenever one exists.
class SplitFinder {
 public:
  explicit SplitFinder(const Graph& g)
      : g_(g),
        n_(g.num_vertices()),
        key_(n_),
        in_u_(n_, 0),
        cnt_(n_, 0),
        hsum_(n_, 0),
        queued_(n_, 0) {
    for (Vertex v = 0; v < n_; ++v) key_[v] = mix64(static_cast<std::uint64_t>(v) + 0x51ed27ULL);
  }

  std::optional<Split> find() {
    if (n_ < 4) return std::nullopt;
    Vertex r0 = 0;
    for (Vertex v = 1; v < n_; ++v) {
      if (g_.degree(v) < g_.degree(r0)) r0 = v;
    }
    std::vector<char> mark(n_, 0);
    std::vector<Vertex> cand;
    for (Vertex y = 0; y < n_; ++y) {
      if (y == r0) continue;
      cand.clear();
      for (Vertex a : {r0, y}) {
        for (const Incidence& inc : g_.incident(a)) {
          if (inc.neighbor != r0 && inc.neighbor != y && !mark[inc.neighbor]) {
            mark[inc.neighbor] = 1;
            cand.push_back(inc.neighbor);
          }
        }
      }
      for (Vertex c : cand) mark[c] = 0;
      std::sort(cand.begin(), cand.end());
      for (Vertex d : cand) {
        if (auto s = close(r0, y, d)) return s;
      }
    }
    return std::nullopt;
  }

 private:
  void reset() {
    for (Vertex v : members_) in_u_[v] = 0;
    for (Vertex v : touched_) {
      cnt_[v] = 0;
      hsum_[v] = 0;
      queued_[v] = 0;
    }
    members_.clear();
    touched_.clear();
    queue_.clear();
  }

  bool differs(Vertex z) const {
    return z != d_ && !in_u_[z] && cnt_[z] > 0 && (cnt_[z] != cnt_[d_] || hsum_[z] != hsum_[d_]);
  }

  void enqueue_if_differs(Vertex z) {
    if (!queued_[z] && differs(z)) {
      queued_[z] = 1;
      queue_.push_back(z);
    }
  }

  void add(Vertex u) {
    in_u_[u] = 1;
    members_.push_back(u);
    bool d_changed = false;
    for (const Incidence& inc : g_.incident(u)) {
      const Vertex z = inc.neighbor;
      if (in_u_[z]) continue;
      if (cnt_[z] == 0 && hsum_[z] == 0) touched_.push_back(z);
      ++cnt_[z];
      hsum_[z] += key_[u];
      if (z == d_) d_changed = true;
    }
    if (d_changed) {
      for (Vertex z : touched_) enqueue_if_differs(z);
    } else {
      for (const Incidence& inc : g_.incident(u)) enqueue_if_differs(inc.neighbor);
    }
  }

  std::optional<Split> close(Vertex r0, Vertex y, Vertex d) {
    reset();
    d_ = d;
    add(r0);
    add(y);
    while (!queue_.empty() && static_cast<Vertex>(members_.size()) <= n_ - 2) {
      const Vertex z = queue_.back();
      queue_.pop_back();
      if (!in_u_[z]) add(z);
    }
    std::optional<Split> result;
    if (static_cast<Vertex>(members_.size()) <= n_ - 2) {
      std::vector<char> side(in_u_.begin(), in_u_.end());
      if (!side[0]) {
        for (auto& s : side) s = !s;
      }
      Split s;
      if (check_split(g_, side, s)) result = std::move(s);
    }
    reset();
    return result;
  }

  const Graph& g_;
  Vertex n_;
  std::vector<std::uint64_t> key_;
  std::vector<char> in_u_;
  std::vector<std::int64_t> cnt_;
  std::vector<std::uint64_t> hsum_;
  std::vector<char> queued_;
  std::vector<Vertex> members_;
  std::vector<Vertex> touched_;
  std::vector<Vertex> queue_;
  Vertex d_ = kNoVertex;
};

}  // namespace detail

// Returns a split of a connected graph, or nothing if the graph is prime or
// has fewer than four vertices. The side holding the lowest vertex id is U.
inline std::optional<Split> find_split(const Graph& g) {
  if (!is_connected(g)) throw Error("disconnected", "find_split needs a connected graph");
  return detail::SplitFinder(g).find();
}

// One component of a split decomposition. Labels below the original vertex
// count are original vertices; the rest are split markers.
struct Component {
  std::vector<Vertex> labels;  // sorted
  Graph graph;                 // over positions in `labels`

  Vertex order() const { return static_cast<Vertex>(labels.size()); }
  Vertex local(Vertex label) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    return (it != labels.end() && *it == label) ? static_cast<Vertex>(it - labels.begin()) : kNoVertex;
  }
};

// Marker pair linking two components; oriented away from the root.
struct TreeEdge {
  int parent = -1;
  int child = -1;
  Vertex parent_marker = kNoVertex;
  Vertex child_marker = kNoVertex;
};

// One simple decomposition step: `side` (labels) is cut off from the rest of
// its piece, gaining `side_marker`; the rest gains `other_marker`.
struct SplitStep {
  std::vector<Vertex> side;
  Vertex side_marker = kNoVertex;
  Vertex other_marker = kNoVertex;
};

struct SplitTree {
  Vertex num_original = 0;
  std::vector<Component> components;
  std::vector<TreeEdge> edges;
  int root = 0;
  std::vector<int> parent_edge;               // per component; -1 at the root
  std::vector<std::vector<int>> child_edges;  // per component
  std::vector<int> preorder;                  // components, parents first
  std::vector<SplitStep> steps;               // in the order they were applied

  bool is_marker(Vertex label) const { return label >= num_original; }
  Vertex num_markers() const { return static_cast<Vertex>(marker_mate_.size()); }
  Vertex mate(Vertex marker) const { return marker_mate_[marker - num_original]; }
  int component_of(Vertex label) const { return location_[label]; }

  // Filled by finalize(): label -> component, marker -> paired marker.
  std::vector<int> location_;
  std::vector<Vertex> marker_mate_;
};

inline std::string label_name(const SplitTree& t, Vertex label) {
  return t.is_marker(label) ? "s" + std::to_string(label - t.num_original) : std::to_string(label);
}

namespace detail {

// Builds a minimal split decomposition. Pendant vertices and twins are cut
// off first (each is a split whose small side has two vertices); this alone
// decomposes distance-hereditary graphs completely and runs in near-linear
// time. Pieces left with neither are handed to SplitFinder. Each piece keeps
// its vertices in "slots"; cutting off {x, y} deletes one slot and renames
// the other to the new marker, so the rest of the piece is never copied.
class Decomposer {
 public:
  explicit Decomposer(const Graph& g) : g_(g), n_(g.num_vertices()) {}

  SplitTree run() {
    SplitTree t;
    t.num_original = n_;
    if (n_ < 4) {
      Component c;
      for (Vertex v = 0; v < n_; ++v) c.labels.push_back(v);
      c.graph = g_;
      t.components.push_back(std::move(c));
      finalize(t);
      return t;
    }
    init_slots();
    for (;;) {
      drain();
      int next = -1;
      for (int p = scan_from_; p < static_cast<int>(piece_size_.size()); ++p) {
        if (piece_state_[p] == kOpen && piece_size_[p] >= 4) {
          next = p;
          break;
        }
        if (piece_state_[p] != kOpen || piece_size_[p] < 4) scan_from_ = p + 1;
      }
      if (next < 0) break;
      general_split(next);
    }
    emit_pieces(t);
    t.steps = std::move(steps_);
    finalize(t);
    return t;
  }

 private:
  enum PieceState : char { kOpen, kRetired, kPrime };

  void init_slots() {
    const std::size_t n = static_cast<std::size_t>(n_);
    label_.resize(n);
    piece_.assign(n, 0);
    alive_.assign(n, 1);
    deg_.resize(n);
    hash_.assign(n, 0);
    key_.resize(n);
    adj_.resize(n);
    in_queue_.assign(n, 0);
    stamp_.assign(n, 0);
    bpos_.assign(2 * n, -1);
    bkey_.assign(2 * n, 0);
    for (Vertex v = 0; v < n_; ++v) {
      label_[v] = v;
      key_[v] = mix64(static_cast<std::uint64_t>(v) * 2 + 1);
    }
    for (Vertex v = 0; v < n_; ++v) {
      adj_[v].reserve(g_.degree(v));
      for (const Incidence& inc : g_.incident(v)) {
        adj_[v].push_back(inc.neighbor);
        hash_[v] += key_[inc.neighbor];
      }
      deg_[v] = g_.degree(v);
    }
    piece_size_.push_back(n_);
    piece_state_.push_back(kOpen);
    piece_members_.emplace_back();
    for (Vertex v = 0; v < n_; ++v) {
      piece_members_[0].push_back(v);
      push(v);
    }
  }

  Vertex new_slot(Vertex label, int piece) {
    const Vertex s = static_cast<Vertex>(label_.size());
    label_.push_back(label);
    piece_.push_back(piece);
    alive_.push_back(1);
    deg_.push_back(0);
    hash_.push_back(0);
    key_.push_back(mix64(static_cast<std::uint64_t>(s) * 2 + 1));
    adj_.emplace_back();
    in_queue_.push_back(0);
    stamp_.push_back(0);
    bpos_.insert(bpos_.end(), {-1, -1});
    bkey_.insert(bkey_.end(), {0, 0});
    return s;
  }

  Vertex new_marker() { return n_ + next_marker_++; }

  std::uint64_t piece_salt(int p) const { return mix64(static_cast<std::uint64_t>(p) + 0x7f4a7c15ULL); }
  std::uint64_t open_key(Vertex s) const { return hash_[s] ^ piece_salt(piece_[s]); }
  std::uint64_t closed_key(Vertex s) const {
    return (hash_[s] + key_[s]) ^ piece_salt(piece_[s]) ^ 0xc2b2ae3d27d4eb4fULL;
  }

  // Each slot sits in at most one open-neighbourhood and one
  // closed-neighbourhood bucket, under the key it had when last indexed.
  void unindex(Vertex s) {
    for (int kind = 0; kind < 2; ++kind) {
      const std::size_t at = 2 * static_cast<std::size_t>(s) + kind;
      if (bpos_[at] < 0) continue;
      auto it = buckets_.find(bkey_[at]);
      auto& list = it->second;
      const Vertex moved = list.back();
      const std::size_t last = 2 * static_cast<std::size_t>(moved);
      const int moved_kind =
          (bpos_[last] == static_cast<int>(list.size()) - 1 && bkey_[last] == bkey_[at]) ? 0 : 1;
      list[bpos_[at]] = moved;
      bpos_[2 * static_cast<std::size_t>(moved) + moved_kind] = bpos_[at];
      list.pop_back();
      if (list.empty()) buckets_.erase(it);
      bpos_[at] = -1;
    }
  }

  void index_slot(Vertex s) {
    unindex(s);
    const std::uint64_t keys[2] = {open_key(s), closed_key(s)};
    for (int kind = 0; kind < 2; ++kind) {
      const std::size_t at = 2 * static_cast<std::size_t>(s) + kind;
      auto& list = buckets_[keys[kind]];
      bkey_[at] = keys[kind];
      bpos_[at] = static_cast<int>(list.size());
      list.push_back(s);
    }
  }

  void push(Vertex s) {
    if (!in_queue_[s]) {
      in_queue_[s] = 1;
      queue_.push_back(s);
    }
  }

  // Visits live neighbours, dropping dead entries from the list as it goes.
  template <typename F>
  void for_live(Vertex s, F&& f) {
    auto& list = adj_[s];
    std::size_t keep = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Vertex t = list[i];
      if (!alive_[t]) continue;
      list[keep++] = t;
    }
    list.resize(keep);
    for (Vertex t : list) f(t);
  }

  bool same_open(Vertex s, Vertex t) {
    if (deg_[s] != deg_[t]) return false;
    ++cur_stamp_;
    for_live(s, [&](Vertex z) { stamp_[z] = cur_stamp_; });
    bool ok = true;
    for_live(t, [&](Vertex z) { ok = ok && stamp_[z] == cur_stamp_; });
    return ok;
  }

  bool same_closed(Vertex s, Vertex t) {
    if (deg_[s] != deg_[t]) return false;
    ++cur_stamp_;
    stamp_[s] = cur_stamp_;
    for_live(s, [&](Vertex z) { stamp_[z] = cur_stamp_; });
    if (stamp_[t] != cur_stamp_) return false;
    bool ok = true;
    for_live(t, [&](Vertex z) { ok = ok && stamp_[z] == cur_stamp_; });
    return ok;
  }

  Vertex find_twin(Vertex s, bool closed) {
    const std::uint64_t k = closed ? closed_key(s) : open_key(s);
    auto it = buckets_.find(k);
    if (it == buckets_.end()) return kNoVertex;
    for (Vertex t : it->second) {
      if (t == s || piece_[t] != piece_[s]) continue;
      if ((closed ? closed_key(t) : open_key(t)) != k) continue;
      if (closed ? same_closed(s, t) : same_open(s, t)) return t;
    }
    return kNoVertex;
  }

  void remove_slot(Vertex y) {
    unindex(y);
    alive_[y] = 0;
    --piece_size_[piece_[y]];
    for_live(y, [&](Vertex t) {
      --deg_[t];
      hash_[t] -= key_[y];
      push(t);
    });
  }

  // Cuts {keep, drop} off the piece. `keep`'s slot stays behind as the
  // marker of the remaining piece.
  void cut_pair(Vertex keep, Vertex drop, bool keep_drop_adjacent, bool keep_to_marker,
                bool drop_to_marker) {
    const Vertex a = label_[keep];
    const Vertex b = label_[drop];
    const Vertex m_side = new_marker();
    const Vertex m_rest = new_marker();
    std::vector<std::pair<Vertex, Vertex>> edges;
    if (keep_drop_adjacent) edges.emplace_back(a, b);
    if (keep_to_marker) edges.emplace_back(a, m_side);
    if (drop_to_marker) edges.emplace_back(b, m_side);
    emitted_.push_back({{a, b, m_side}, std::move(edges)});
    steps_.push_back({{std::min(a, b), std::max(a, b)}, m_side, m_rest});
    label_[keep] = m_rest;
    remove_slot(drop);
  }

  void drain() {
    while (!queue_.empty()) {
      const Vertex s = queue_.front();
      queue_.pop_front();
      in_queue_[s] = 0;
      if (!alive_[s] || piece_size_[piece_[s]] < 4) continue;
      index_slot(s);
      if (deg_[s] == 1) {
        Vertex q = kNoVertex;
        for_live(s, [&](Vertex t) { q = t; });
        // Pendant s hanging off q: {s, q} is the small side, q keeps the slot.
        cut_pair(q, s, true, true, false);
        continue;
      }
      for (bool closed : {true, false}) {
        const Vertex t = find_twin(s, closed);
        if (t == kNoVertex) continue;
        const Vertex keep = std::min(s, t);
        const Vertex drop = std::max(s, t);
        cut_pair(keep, drop, closed, true, true);
        break;
      }
    }
  }

  std::vector<Vertex> live_members(int p) {
    auto& list = piece_members_[p];
    std::size_t keep = 0;
    for (Vertex s : list) {
      if (alive_[s] && piece_[s] == p) list[keep++] = s;
    }
    list.resize(keep);
    return list;
  }

  void general_split(int p) {
    const std::vector<Vertex> members = live_members(p);
    std::unordered_map<Vertex, Vertex> local;
    local.reserve(members.size() * 2);
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<Vertex>(i);
    std::vector<Edge> edges;
    for (Vertex s : members) {
      for_live(s, [&](Vertex t) {
        if (s < t) edges.push_back({local[s], local[t]});
      });
    }
    const Graph piece = Graph::from_unique_edges(static_cast<Vertex>(members.size()), std::move(edges));
    std::optional<Split> split = SplitFinder(piece).find();
    if (!split) {
      piece_state_[p] = kPrime;
      return;
    }
    piece_state_[p] = kRetired;
    const int pu = static_cast<int>(piece_size_.size());
    const int pw = pu + 1;
    const Vertex mu_label = new_marker();
    const Vertex mw_label = new_marker();
    const Vertex mu = new_slot(mu_label, pu);
    const Vertex mw = new_slot(mw_label, pw);
    std::vector<char> in_u(members.size(), 0);
    std::vector<char> frontier(members.size(), 0);
    for (Vertex i : split->U) in_u[i] = 1;
    for (Vertex i : split->C) frontier[i] = 1;
    for (Vertex i : split->D) frontier[i] = 1;
    SplitStep step;
    for (Vertex i : split->U) step.side.push_back(label_[members[i]]);
    std::sort(step.side.begin(), step.side.end());
    step.side_marker = mu_label;
    step.other_marker = mw_label;
    steps_.push_back(std::move(step));
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Vertex s = members[i];
      auto& list = adj_[s];
      std::size_t keep = 0;
      for (Vertex t : list) {
        if (alive_[t] && in_u[local[t]] == in_u[i]) list[keep++] = t;
      }
      list.resize(keep);
      piece_[s] = in_u[i] ? pu : pw;
      if (frontier[i]) {
        const Vertex m = in_u[i] ? mu : mw;
        list.push_back(m);
        adj_[m].push_back(s);
      }
    }
    piece_size_.push_back(static_cast<Vertex>(split->U.size()) + 1);
    piece_size_.push_back(static_cast<Vertex>(split->W.size()) + 1);
    piece_state_.push_back(kOpen);
    piece_state_.push_back(kOpen);
    piece_members_.emplace_back();
    piece_members_.emplace_back();
    for (std::size_t i = 0; i < members.size(); ++i) piece_members_[in_u[i] ? pu : pw].push_back(members[i]);
    piece_members_[pu].push_back(mu);
    piece_members_[pw].push_back(mw);
    for (int q : {pu, pw}) {
      for (Vertex s : piece_members_[q]) {
        deg_[s] = static_cast<Vertex>(adj_[s].size());
        hash_[s] = 0;
        for (Vertex t : adj_[s]) hash_[s] += key_[t];
        push(s);
      }
    }
  }

  void emit_pieces(SplitTree& t) {
    for (auto& [labels, edges] : emitted_) t.components.push_back(make_component(labels, edges));
    for (int p = 0; p < static_cast<int>(piece_size_.size()); ++p) {
      if (piece_state_[p] == kRetired) continue;
      const std::vector<Vertex> members = live_members(p);
      std::vector<Vertex> labels;
      std::vector<std::pair<Vertex, Vertex>> edges;
      for (Vertex s : members) {
        labels.push_back(label_[s]);
        for_live(s, [&](Vertex q) {
          if (s < q) edges.emplace_back(label_[s], label_[q]);
        });
      }
      t.components.push_back(make_component(labels, edges));
    }
  }

  static Component make_component(std::vector<Vertex> labels,
                                  const std::vector<std::pair<Vertex, Vertex>>& edges) {
    Component c;
    std::sort(labels.begin(), labels.end());
    c.labels = std::move(labels);
    std::vector<Edge> local;
    local.reserve(edges.size());
    for (auto [a, b] : edges) local.push_back({c.local(a), c.local(b)});
    c.graph = Graph::from_unique_edges(c.order(), std::move(local));
    return c;
  }

  const Graph& g_;
  Vertex n_;
  Vertex next_marker_ = 0;
  std::vector<Vertex> label_;
  std::vector<int> piece_;
  std::vector<char> alive_;
  std::vector<Vertex> deg_;
  std::vector<std::uint64_t> hash_;
  std::vector<std::uint64_t> key_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<char> in_queue_;
  std::vector<unsigned> stamp_;
  unsigned cur_stamp_ = 0;
  std::deque<Vertex> queue_;
  std::unordered_map<std::uint64_t, std::vector<Vertex>> buckets_;
  std::vector<int> bpos_;
  std::vector<std::uint64_t> bkey_;
  std::vector<Vertex> piece_size_;
  std::vector<PieceState> piece_state_;
  std::vector<std::vector<Vertex>> piece_members_;
  int scan_from_ = 0;
  std::vector<std::pair<std::vector<Vertex>, std::vector<std::pair<Vertex, Vertex>>>> emitted_;
  std::vector<SplitStep> steps_;

 public:
  // Orients the tree from the component holding vertex 0 and fills lookups.
  static void finalize(SplitTree& t) {
    const Vertex total_labels = t.num_original + static_cast<Vertex>(2 * t.steps.size());
    t.location_.assign(static_cast<std::size_t>(total_labels), -1);
    for (int c = 0; c < static_cast<int>(t.components.size()); ++c) {
      for (Vertex l : t.components[c].labels) t.location_[l] = c;
    }
    t.marker_mate_.assign(2 * t.steps.size(), kNoVertex);
    std::vector<std::vector<std::pair<int, int>>> around(t.components.size());
    for (int i = 0; i < static_cast<int>(t.steps.size()); ++i) {
      const SplitStep& s = t.steps[i];
      t.marker_mate_[s.side_marker - t.num_original] = s.other_marker;
      t.marker_mate_[s.other_marker - t.num_original] = s.side_marker;
      const int a = t.location_[s.side_marker];
      const int b = t.location_[s.other_marker];
      around[a].emplace_back(b, i);
      around[b].emplace_back(a, i);
    }
    t.root = t.num_original > 0 ? t.location_[0] : 0;
    t.parent_edge.assign(t.components.size(), -1);
    t.child_edges.assign(t.components.size(), {});
    t.preorder.clear();
    t.edges.clear();
    if (t.components.empty()) return;
    std::vector<char> seen(t.components.size(), 0);
    t.preorder.push_back(t.root);
    seen[t.root] = 1;
    for (std::size_t head = 0; head < t.preorder.size(); ++head) {
      const int c = t.preorder[head];
      for (auto [d, i] : around[c]) {
        if (seen[d]) continue;
        seen[d] = 1;
        const SplitStep& s = t.steps[i];
        TreeEdge e;
        e.parent = c;
        e.child = d;
        e.parent_marker = t.location_[s.side_marker] == c ? s.side_marker : s.other_marker;
        e.child_marker = t.mate(e.parent_marker);
        t.parent_edge[d] = static_cast<int>(t.edges.size());
        t.child_edges[c].push_back(static_cast<int>(t.edges.size()));
        t.edges.push_back(e);
        t.preorder.push_back(d);
      }
    }
  }
};

}  // namespace detail

inline SplitTree decompose_minimal(const Graph& g) {
  if (!is_connected(g)) throw Error("disconnected", "decompose_minimal needs a connected graph");
  return detail::Decomposer(g).run();
}

// max(2, largest order among components of order at least 4).
inline Vertex split_width(const SplitTree& t) {
  Vertex k = 2;
  for (const Component& c : t.components) {
    if (c.order() >= 4) k = std::max(k, c.order());
  }
  return k;
}

inline Vertex split_width(const Graph& g) { return split_width(decompose_minimal(g)); }

// Original vertices seen through `marker`: the neighbours of its mate,
// following further markers recursively.
inline std::vector<Vertex> accessible_originals(const SplitTree& t, Vertex marker) {
  std::vector<Vertex> out;
  std::vector<Vertex> stack{marker};
  while (!stack.empty()) {
    const Vertex m = t.mate(stack.back());
    stack.pop_back();
    const Component& c = t.components[t.component_of(m)];
    for (const Incidence& inc : c.graph.incident(c.local(m))) {
      const Vertex z = c.labels[inc.neighbor];
      if (t.is_marker(z)) {
        stack.push_back(z);
      } else {
        out.push_back(z);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Original frontier sets of a tree edge: the child side's vertices with a
// neighbour across the split, and the parent side's.
struct FrontierSets {
  std::vector<Vertex> child_side;
  std::vector<Vertex> parent_side;
};

inline FrontierSets frontier_sets(const SplitTree& t, int edge) {
  const TreeEdge& e = t.edges[edge];
  return {accessible_originals(t, e.parent_marker), accessible_originals(t, e.child_marker)};
}

// Original vertices held by the components of the subtree under `component`.
inline std::vector<Vertex> subtree_originals(const SplitTree& t, int component) {
  std::vector<Vertex> out;
  std::vector<int> stack{component};
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    for (Vertex l : t.components[c].labels) {
      if (!t.is_marker(l)) out.push_back(l);
    }
    for (int e : t.child_edges[c]) stack.push_back(t.edges[e].child);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct DecompositionReport {
  bool ok = true;
  std::string message;
};

namespace detail {

inline DecompositionReport violation(std::string what, const std::string& detail) {
  return {false, std::move(what) + ": " + detail};
}

// Re-applies the recorded steps to g and compares the pieces it ends with
// against the tree's components.
inline DecompositionReport replay_steps(const Graph& g, const SplitTree& t) {
  const Vertex total = t.num_original + static_cast<Vertex>(2 * t.steps.size());
  std::vector<std::vector<Vertex>> adj(total);
  std::vector<int> piece(total, -1);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    piece[v] = 0;
    for (const Incidence& inc : g.incident(v)) adj[v].push_back(inc.neighbor);
  }
  std::vector<std::vector<Vertex>> members{{}};
  for (Vertex v = 0; v < g.num_vertices(); ++v) members[0].push_back(v);
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const SplitStep& s = t.steps[i];
    const std::string where = "step " + std::to_string(i);
    if (s.side.empty() || s.side_marker < t.num_original || s.side_marker >= total ||
        s.other_marker < t.num_original || s.other_marker >= total ||
        piece[s.side_marker] >= 0 || piece[s.other_marker] >= 0) {
      return violation("replay mismatch", where + " has malformed markers");
    }
    const int p = piece[s.side.front()];
    if (p < 0) return violation("replay mismatch", where + " uses an unknown label");
    std::vector<char> in_side(total, 0);
    for (Vertex l : s.side) {
      if (l < 0 || l >= total || piece[l] != p) {
        return violation("replay mismatch", where + " side spans several pieces");
      }
      in_side[l] = 1;
    }
    std::vector<Vertex> side_frontier;
    std::vector<Vertex> rest_frontier;
    std::int64_t crossing = 0;
    std::vector<char> is_frontier(total, 0);
    for (Vertex a : members[p]) {
      for (Vertex b : adj[a]) {
        if (in_side[a] && !in_side[b]) {
          ++crossing;
          if (!is_frontier[a]) side_frontier.push_back(a);
          if (!is_frontier[b]) rest_frontier.push_back(b);
          is_frontier[a] = is_frontier[b] = 1;
        }
      }
    }
    const std::size_t rest_size = members[p].size() - s.side.size();
    if (s.side.size() < 2 || rest_size < 2 || crossing == 0 ||
        crossing != static_cast<std::int64_t>(side_frontier.size() * rest_frontier.size())) {
      return violation("replay mismatch", where + " is not a split of its piece");
    }
    const int pu = static_cast<int>(members.size());
    const int pw = pu + 1;
    members.emplace_back();
    members.emplace_back();
    for (Vertex a : members[p]) {
      auto& list = adj[a];
      list.erase(std::remove_if(list.begin(), list.end(),
                                [&](Vertex b) { return in_side[a] != in_side[b]; }),
                 list.end());
      piece[a] = in_side[a] ? pu : pw;
      members[piece[a]].push_back(a);
    }
    for (Vertex a : side_frontier) {
      adj[a].push_back(s.side_marker);
      adj[s.side_marker].push_back(a);
    }
    for (Vertex b : rest_frontier) {
      adj[b].push_back(s.other_marker);
      adj[s.other_marker].push_back(b);
    }
    piece[s.side_marker] = pu;
    piece[s.other_marker] = pw;
    members[pu].push_back(s.side_marker);
    members[pw].push_back(s.other_marker);
    members[p].clear();
  }
  for (std::size_t c = 0; c < t.components.size(); ++c) {
    const Component& comp = t.components[c];
    const std::string where = "component " + std::to_string(c);
    if (comp.labels.empty()) return violation("replay mismatch", where + " is empty");
    const int p = piece[comp.labels.front()];
    if (p < 0 || members[p].size() != comp.labels.size()) {
      return violation("replay mismatch", where + " differs from the replayed piece");
    }
    std::int64_t replay_edges = 0;
    for (Vertex a : comp.labels) {
      if (piece[a] != p) return violation("replay mismatch", where + " differs from the replayed piece");
      for (Vertex b : adj[a]) {
        if (a < b) {
          ++replay_edges;
          const Vertex la = comp.local(a);
          const Vertex lb = comp.local(b);
          if (lb == kNoVertex || comp.graph.find_edge(la, lb) == kNoEdge) {
            return violation("replay mismatch", where + " lacks a replayed edge");
          }
        }
      }
    }
    if (replay_edges != comp.graph.num_edges()) {
      return violation("replay mismatch", where + " has edges the replay does not");
    }
  }
  return {};
}

}  // namespace detail

// Independent check of a decomposition against its graph: coverage, tree
// shape, every tree edge a split with the advertised frontiers, component
// edges consistent with g, the step log replaying to the same components,
// and no splittable component of order four or more.
inline DecompositionReport verify_decomposition(const Graph& g, const SplitTree& t) {
  using detail::violation;
  const Vertex n = g.num_vertices();
  if (t.num_original != n) return violation("vertex coverage", "original vertex count differs");
  const Vertex total = n + static_cast<Vertex>(2 * t.steps.size());
  std::vector<int> seen(total, 0);
  for (const Component& c : t.components) {
    for (Vertex l : c.labels) {
      if (l < 0 || l >= total) return violation("vertex coverage", "label " + std::to_string(l) + " out of range");
      ++seen[l];
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (seen[v] != 1) {
      return violation("vertex coverage", "vertex " + std::to_string(v) + " appears " +
                                              std::to_string(seen[v]) + " times");
    }
  }
  for (Vertex l = n; l < total; ++l) {
    if (seen[l] != 1) return violation("tree structure", "marker " + label_name(t, l) + " not used exactly once");
  }
  if (t.components.empty() && n > 0) return violation("vertex coverage", "no components");
  if (!t.components.empty() &&
      (t.edges.size() + 1 != t.components.size() || t.preorder.size() != t.components.size())) {
    return violation("tree structure", "components and tree edges do not form a tree");
  }
  for (const TreeEdge& e : t.edges) {
    if (t.component_of(e.parent_marker) != e.parent || t.component_of(e.child_marker) != e.child ||
        t.mate(e.parent_marker) != e.child_marker) {
      return violation("tree structure", "tree edge markers misplaced");
    }
  }
  for (std::size_t ci = 0; ci < t.components.size(); ++ci) {
    const Component& c = t.components[ci];
    if (!is_connected(c.graph)) return violation("component edges", "component " + std::to_string(ci) + " is disconnected");
    for (const Edge& e : c.graph.edges()) {
      const Vertex a = c.labels[e.u];
      const Vertex b = c.labels[e.v];
      if (!t.is_marker(a) && !t.is_marker(b) && g.find_edge(a, b) == kNoEdge) {
        return violation("component edges", "edge " + std::to_string(a) + "-" + std::to_string(b) + " not in graph");
      }
    }
  }
  for (const Edge& e : g.edges()) {
    if (t.component_of(e.u) != t.component_of(e.v)) continue;
    const Component& c = t.components[t.component_of(e.u)];
    if (c.graph.find_edge(c.local(e.u), c.local(e.v)) == kNoEdge) {
      return violation("component edges", "graph edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " missing");
    }
  }
  for (int ei = 0; ei < static_cast<int>(t.edges.size()); ++ei) {
    const std::vector<Vertex> below = subtree_originals(t, t.edges[ei].child);
    const FrontierSets f = frontier_sets(t, ei);
    std::vector<char> is_below(n, 0);
    for (Vertex v : below) is_below[v] = 1;
    std::int64_t crossing = 0;
    for (const Edge& e : g.edges()) crossing += is_below[e.u] != is_below[e.v];
    bool ok = below.size() >= 2 && n - below.size() >= 2 && !f.child_side.empty() &&
              !f.parent_side.empty() &&
              crossing == static_cast<std::int64_t>(f.child_side.size() * f.parent_side.size());
    for (Vertex a : f.child_side) ok = ok && is_below[a];
    for (Vertex b : f.parent_side) ok = ok && !is_below[b];
    for (std::size_t i = 0; ok && i < f.child_side.size(); ++i) {
      for (Vertex b : f.parent_side) ok = ok && g.find_edge(f.child_side[i], b) != kNoEdge;
    }
    if (!ok) return violation("not a split", "tree edge " + std::to_string(ei));
  }
  if (DecompositionReport r = detail::replay_steps(g, t); !r.ok) return r;
  for (std::size_t ci = 0; ci < t.components.size(); ++ci) {
    const Component& c = t.components[ci];
    if (c.order() >= 4 && detail::SplitFinder(c.graph).find()) {
      return violation("not minimal", "component " + std::to_string(ci) + " still has a split");
    }
  }
  return {};
}

}  // namespace bmatch

#endif  // BMATCH_SPLIT_DECOMP_HPP_
