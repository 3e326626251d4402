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

#ifndef BMATCH_RESULT_IO_HPP_
#define BMATCH_RESULT_IO_HPP_

#include <cstdint>
#include <istream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "bmatch/error.hpp"
#include "bmatch/graph.hpp"
#include "bmatch/solver.hpp"

namespace bmatch {

// {"cardinality": N, "edges": [[u, v, w], ...], "stats": {...}}; edges with
// positive weight in edge-id order, u < v as in the input file.
struct ResultDocument {
  std::int64_t cardinality = 0;
  std::vector<std::tuple<Vertex, Vertex, std::int64_t>> edges;
};

inline nlohmann::json stats_to_json(const SolveStats& s, bool timings) {
  nlohmann::json j;
  j["path"] = s.path;
  j["kernel_calls"] = {{"phase1", s.kernel_calls_phase1},
                       {"phase2", s.kernel_calls_phase2},
                       {"direct", s.kernel_calls_direct}};
  j["components"] = s.components;
  j["split_width"] = s.split_width;
  j["max_component_order"] = s.max_component_order;
  j["merges"] = s.merges;
  j["merge_work"] = s.merge_work;
  j["normalize_rule3"] = s.normalize_rule3;
  j["maxcost_fallbacks"] = s.maxcost_fallbacks;
  j["long_normalizations"] = s.long_normalizations;
  if (timings) {
    j["ms"] = {{"decompose", s.decompose_ms},
               {"phase1", s.phase1_ms},
               {"phase2", s.phase2_ms},
               {"merge", s.merge_ms}};
  }
  return j;
}

inline nlohmann::json result_to_json(const Graph& g, const SolveResult& r, bool timings = false) {
  nlohmann::json j;
  j["cardinality"] = r.cardinality;
  nlohmann::json edges = nlohmann::json::array();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (r.matching[e] > 0) {
      const Edge& ed = g.edge(e);
      edges.push_back({std::min(ed.u, ed.v), std::max(ed.u, ed.v), r.matching[e]});
    }
  }
  j["edges"] = std::move(edges);
  j["stats"] = stats_to_json(r.stats, timings);
  return j;
}

inline ResultDocument parse_result(std::istream& in) {
  ResultDocument doc;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    doc.cardinality = j.at("cardinality").get<std::int64_t>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw Error("parse", "edge entries must be [u, v, weight]");
      doc.edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>(), e[2].get<std::int64_t>());
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error("parse", std::string("result document: ") + ex.what());
  }
  return doc;
}

// Checks a result document against (g, b) without trusting the solver.
inline ValidationReport verify_result(const Graph& g, const CapacityMap& b, const ResultDocument& doc) {
  BMatching x(g.num_edges(), 0);
  for (const auto& [u, v, w] : doc.edges) {
    const EdgeId e = (u < 0 || v < 0 || u >= g.num_vertices() || v >= g.num_vertices() || u == v)
                         ? kNoEdge
                         : g.find_edge(u, v);
    if (e == kNoEdge) {
      return {false, "unknown edge {" + std::to_string(u) + "," + std::to_string(v) + "}", kNoVertex, kNoEdge};
    }
    if (w < 0) return {false, "negative weight on edge " + std::to_string(e), kNoVertex, e};
    x[e] += w;
  }
  ValidationReport rep = validate_bmatching(g, b, x);
  if (!rep) return rep;
  const std::int64_t card = cardinality(x);
  if (card != doc.cardinality) {
    return {false,
            "cardinality mismatch: document says " + std::to_string(doc.cardinality) + ", weights sum to " +
                std::to_string(card),
            kNoVertex, kNoEdge};
  }
  return rep;
}

}  // namespace bmatch

#endif  // BMATCH_RESULT_IO_HPP_
