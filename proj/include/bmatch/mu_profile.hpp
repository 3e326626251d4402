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

#ifndef BMATCH_MU_PROFILE_HPP_
#define BMATCH_MU_PROFILE_HPP_

#include <cstdint>
#include <map>

#include "bmatch/error.hpp"
#include "bmatch/graph.hpp"
#include "bmatch/kernel.hpp"

namespace bmatch {

// μ(t) = μ0 + t up to c1, then one more unit per two until c1 + 2·c2, then
// flat.
struct MuProfile {
  std::int64_t mu0 = 0;
  std::int64_t c1 = 0;
  std::int64_t c2 = 0;

  friend bool operator==(const MuProfile&, const MuProfile&) = default;
};

inline std::int64_t mu_from_profile(const MuProfile& p, std::int64_t t) {
  if (t < 0) throw Error("capacity-range", "negative capacity in mu_from_profile");
  if (t <= p.c1) return p.mu0 + t;
  if (t <= p.c1 + 2 * p.c2) return p.mu0 + p.c1 + (t - p.c1) / 2;
  return p.mu0 + p.c1 + p.c2;
}

// Maximum b-matching cardinality with b_w set to t. The entry of `b` at w
// is ignored.
inline std::int64_t mu_at(const Graph& g, const CapacityMap& b, Vertex w, std::int64_t t,
                          Kernel& kernel) {
  if (t < 0) throw Error("capacity-range", "negative capacity in mu_at");
  if (w < 0 || w >= g.num_vertices()) throw Error("vertex-range", "distinguished vertex out of range");
  CapacityMap bt = b;
  bt[w] = t;
  return kernel.solve_bmatching(g, bt).cardinality;
}

inline std::int64_t mu_at(const Graph& g, const CapacityMap& b, Vertex w, std::int64_t t) {
  Kernel kernel;
  return mu_at(g, b, w, t, kernel);
}

// Upper bound on compute_profile's kernel calls for capacities summing to
// `total`.
inline std::int64_t profile_call_bound(std::int64_t total) {
  std::int64_t log = 0;
  while ((std::int64_t{1} << log) < total + 2) ++log;
  return 4 * log + 8;
}

// Doubling from 1 until the predicate fails or the cap is reached, then
// bisection between the last success and the first failure.
class ProfileSearch {
 public:
  ProfileSearch(const Graph& g, const CapacityMap& b, Vertex w, Kernel& kernel)
      : g_(g), b_(b), w_(w), kernel_(kernel) {}

  MuProfile run() {
    MuProfile p;
    p.mu0 = mu(0);
    std::int64_t cap = 0;
    for (const Incidence& inc : g_.incident(w_)) cap += b_[inc.neighbor];
    if (cap == 0) return p;
    p.c1 = largest_true(cap, [&](std::int64_t t) { return mu(t) == p.mu0 + t; });
    const std::int64_t base = p.mu0 + p.c1;
    p.c2 = largest_true((cap - p.c1) / 2, [&](std::int64_t i) { return mu(p.c1 + 2 * i) == base + i; });
    return p;
  }

 private:
  std::int64_t mu(std::int64_t t) {
    auto it = memo_.find(t);
    if (it != memo_.end()) return it->second;
    const std::int64_t v = mu_at(g_, b_, w_, t, kernel_);
    memo_.emplace(t, v);
    return v;
  }

  // pred(0) is true by construction; returns the largest i <= hi with pred(i).
  template <typename Pred>
  static std::int64_t largest_true(std::int64_t hi, Pred&& pred) {
    if (hi <= 0) return 0;
    std::int64_t good = 0;
    std::int64_t probe = 1;
    std::int64_t bad = -1;
    for (;;) {
      if (probe >= hi) {
        if (pred(hi)) return hi;
        bad = hi;
        break;
      }
      if (!pred(probe)) {
        bad = probe;
        break;
      }
      good = probe;
      probe *= 2;
    }
    while (bad - good > 1) {
      const std::int64_t mid = good + (bad - good) / 2;
      (pred(mid) ? good : bad) = mid;
    }
    return good;
  }

  const Graph& g_;
  const CapacityMap& b_;
  Vertex w_;
  Kernel& kernel_;
  std::map<std::int64_t, std::int64_t> memo_;
};

inline MuProfile compute_profile(const Graph& g, const CapacityMap& b, Vertex w, Kernel& kernel) {
  if (w < 0 || w >= g.num_vertices()) throw Error("vertex-range", "distinguished vertex out of range");
  return ProfileSearch(g, b, w, kernel).run();
}

inline MuProfile compute_profile(const Graph& g, const CapacityMap& b, Vertex w) {
  Kernel kernel;
  return compute_profile(g, b, w, kernel);
}

}  // namespace bmatch

#endif  // BMATCH_MU_PROFILE_HPP_
