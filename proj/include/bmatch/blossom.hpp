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

#ifndef BMATCH_BLOSSOM_HPP_
#define BMATCH_BLOSSOM_HPP_

#include <vector>

#include "bmatch/graph.hpp"

namespace bmatch {

// Maximum-cardinality matching in a general graph (Edmonds). Greedy start,
// then one alternating-tree search per exposed root; blossoms are contracted
// by relabelling bases of the vertices in the current tree only.
class CardinalityMatcher {
 public:
  explicit CardinalityMatcher(const Graph& g)
      : g_(g),
        n_(g.num_vertices()),
        mate_(n_, kNoVertex),
        parent_(n_, kNoVertex),
        base_(n_),
        in_tree_(n_, 0),
        in_blossom_(n_, 0),
        on_path_(n_, 0) {}

  // mate[v] or kNoVertex.
  const std::vector<Vertex>& solve() {
    greedy();
    return run();
  }

  // Warm start from a valid matching (mate array, symmetric).
  const std::vector<Vertex>& solve(std::vector<Vertex> initial) {
    mate_ = std::move(initial);
    greedy();
    return run();
  }

 private:
  const std::vector<Vertex>& run() {
    for (Vertex root = 0; root < n_; ++root) {
      if (mate_[root] != kNoVertex) continue;
      Vertex end = search(root);
      if (end != kNoVertex) augment(end);
    }
    return mate_;
  }

  void greedy() {
    for (Vertex v = 0; v < n_; ++v) {
      if (mate_[v] != kNoVertex) continue;
      for (const Incidence& inc : g_.incident(v)) {
        if (mate_[inc.neighbor] == kNoVertex) {
          mate_[v] = inc.neighbor;
          mate_[inc.neighbor] = v;
          break;
        }
      }
    }
  }

  Vertex lca(Vertex a, Vertex b) {
    ++stamp_;
    for (;;) {
      a = base_[a];
      on_path_[a] = stamp_;
      if (mate_[a] == kNoVertex) break;
      a = parent_[mate_[a]];
    }
    for (;;) {
      b = base_[b];
      if (on_path_[b] == stamp_) return b;
      b = parent_[mate_[b]];
    }
  }

  void mark_path(Vertex v, Vertex b, Vertex child) {
    while (base_[v] != b) {
      in_blossom_[base_[v]] = blossom_stamp_;
      in_blossom_[base_[mate_[v]]] = blossom_stamp_;
      parent_[v] = child;
      child = mate_[v];
      v = parent_[mate_[v]];
    }
  }

  void add_to_tree(Vertex v) {
    if (in_tree_[v] != tree_stamp_) {
      in_tree_[v] = tree_stamp_;
      tree_.push_back(v);
    }
  }

  Vertex search(Vertex root) {
    ++tree_stamp_;
    for (Vertex v : tree_) {
      parent_[v] = kNoVertex;
      base_[v] = v;
    }
    tree_.clear();
    queue_.clear();
    add_to_tree(root);
    parent_[root] = kNoVertex;
    base_[root] = root;
    std::vector<char>& even = even_;
    even.resize(n_, 0);
    even_list_.clear();
    auto set_even = [&](Vertex v) {
      if (!even[v]) {
        even[v] = 1;
        even_list_.push_back(v);
        queue_.push_back(v);
      }
    };
    set_even(root);
    Vertex found = kNoVertex;
    for (std::size_t qi = 0; qi < queue_.size() && found == kNoVertex; ++qi) {
      const Vertex v = queue_[qi];
      for (const Incidence& inc : g_.incident(v)) {
        const Vertex to = inc.neighbor;
        if (in_tree_[to] != tree_stamp_) {
          add_to_tree(to);
          parent_[to] = kNoVertex;
          base_[to] = to;
        }
        if (base_[v] == base_[to] || mate_[v] == to) continue;
        if (to == root || (mate_[to] != kNoVertex && parent_[mate_[to]] != kNoVertex)) {
          // `to` is even: contract the blossom.
          const Vertex cur = lca(v, to);
          ++blossom_stamp_;
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (Vertex i : tree_) {
            if (in_blossom_[base_[i]] == blossom_stamp_) {
              base_[i] = cur;
              set_even(i);
            }
          }
        } else if (parent_[to] == kNoVertex) {
          parent_[to] = v;
          if (mate_[to] == kNoVertex) {
            found = to;
            break;
          }
          add_to_tree(mate_[to]);
          parent_[mate_[to]] = kNoVertex;
          base_[mate_[to]] = mate_[to];
          set_even(mate_[to]);
        }
      }
    }
    for (Vertex v : even_list_) even[v] = 0;
    return found;
  }

  void augment(Vertex v) {
    while (v != kNoVertex) {
      const Vertex pv = parent_[v];
      const Vertex ppv = mate_[pv];
      mate_[v] = pv;
      mate_[pv] = v;
      v = ppv;
    }
  }

  const Graph& g_;
  Vertex n_;
  std::vector<Vertex> mate_;
  std::vector<Vertex> parent_;
  std::vector<Vertex> base_;
  std::vector<unsigned> in_tree_;
  std::vector<unsigned> in_blossom_;
  std::vector<unsigned> on_path_;
  std::vector<char> even_;
  std::vector<Vertex> even_list_;
  std::vector<Vertex> tree_;
  std::vector<Vertex> queue_;
  unsigned stamp_ = 0;
  unsigned tree_stamp_ = 0;
  unsigned blossom_stamp_ = 0;
};

inline std::vector<Vertex> maximum_cardinality_mates(const Graph& g) {
  CardinalityMatcher m(g);
  return m.solve();
}

}  // namespace bmatch

#endif  // BMATCH_BLOSSOM_HPP_
