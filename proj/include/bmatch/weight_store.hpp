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

#ifndef BMATCH_WEIGHT_STORE_HPP_
#define BMATCH_WEIGHT_STORE_HPP_

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bmatch/error.hpp"
#include "bmatch/graph.hpp"

namespace bmatch {

class WeightStore;

enum class Side : std::uint8_t { kU, kW };

// Handle onto one side of a pending split. Reads and writes of the shared
// edge go to that side's private cell; every other edge goes to the common
// cell. Views are cheap values and stay valid until the matching merge.
class StoreView {
 public:
  std::int64_t get(EdgeId e) const;
  void set(EdgeId e, std::int64_t value) const;
  void add(EdgeId e, std::int64_t delta) const { set(e, get(e) + delta); }

  Side side() const { return side_; }
  std::size_t split_id() const { return split_; }
  WeightStore& store() const { return *store_; }

 private:
  friend class WeightStore;
  StoreView(WeightStore* store, std::size_t split, Side side)
      : store_(store), split_(split), side_(side) {}

  WeightStore* store_;
  std::size_t split_;
  Side side_;
};

// Edge-weight storage with O(1) access, O(1) split of a shared edge and O(1)
// merge back (shared edge takes the max of both sides).
class WeightStore {
 public:
  explicit WeightStore(EdgeId num_edges)
      : cells_(static_cast<std::size_t>(num_edges), 0),
        handle_(static_cast<std::size_t>(num_edges)) {
    for (std::size_t e = 0; e < handle_.size(); ++e) handle_[e] = e;
  }

  EdgeId num_edges() const { return static_cast<EdgeId>(handle_.size()); }

  std::int64_t get(EdgeId e) const { return cells_[handle_[e]]; }
  void set(EdgeId e, std::int64_t value) { cells_[handle_[e]] = value; }
  void add(EdgeId e, std::int64_t delta) { cells_[handle_[e]] += delta; }

  // Duplicates the cell of `shared_edge`; both views start from its value.
  std::pair<StoreView, StoreView> split(EdgeId shared_edge) {
    if (shared_edge < 0 || shared_edge >= num_edges()) {
      throw Error("edge-range", "split on unknown edge");
    }
    if (split_of_edge(shared_edge) != kNone) {
      throw Error("double-split", "edge " + std::to_string(shared_edge) +
                                      " is already split");
    }
    const std::int64_t value = get(shared_edge);
    PendingSplit p;
    p.edge = shared_edge;
    p.cell_u = cells_.size();
    cells_.push_back(value);
    p.cell_w = cells_.size();
    cells_.push_back(value);
    p.active = true;
    splits_.push_back(p);
    const std::size_t id = splits_.size() - 1;
    active_.emplace(shared_edge, id);
    return {StoreView(this, id, Side::kU), StoreView(this, id, Side::kW)};
  }

  // Folds a split back: shared edge := max(U value, W value).
  void merge(const StoreView& u_view, const StoreView& w_view) {
    if (u_view.store_ != this || w_view.store_ != this ||
        u_view.split_ != w_view.split_ || u_view.side_ != Side::kU ||
        w_view.side_ != Side::kW || u_view.split_ >= splits_.size() ||
        !splits_[u_view.split_].active) {
      throw Error("mismatched-views", "views do not come from one pending split");
    }
    PendingSplit& p = splits_[u_view.split_];
    cells_[handle_[p.edge]] = std::max(cells_[p.cell_u], cells_[p.cell_w]);
    p.active = false;
    active_.erase(p.edge);
  }

  BMatching snapshot() const {
    BMatching x(handle_.size());
    for (std::size_t e = 0; e < handle_.size(); ++e) x[e] = cells_[handle_[e]];
    return x;
  }

 private:
  friend class StoreView;
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct PendingSplit {
    EdgeId edge = kNoEdge;
    std::size_t cell_u = 0;
    std::size_t cell_w = 0;
    bool active = false;
  };

  std::size_t split_of_edge(EdgeId e) const {
    auto it = active_.find(e);
    return it == active_.end() ? kNone : it->second;
  }

  std::int64_t& cell(std::size_t split, Side side, EdgeId e) {
    const PendingSplit& p = splits_[split];
    if (p.active && p.edge == e) return cells_[side == Side::kU ? p.cell_u : p.cell_w];
    return cells_[handle_[e]];
  }

  std::vector<std::int64_t> cells_;
  std::vector<std::size_t> handle_;
  std::vector<PendingSplit> splits_;
  std::unordered_map<EdgeId, std::size_t> active_;
};

inline std::int64_t StoreView::get(EdgeId e) const { return store_->cell(split_, side_, e); }
inline void StoreView::set(EdgeId e, std::int64_t value) const {
  store_->cell(split_, side_, e) = value;
}

}  // namespace bmatch

#endif  // BMATCH_WEIGHT_STORE_HPP_
