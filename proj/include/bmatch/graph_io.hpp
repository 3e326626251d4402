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

#ifndef BMATCH_GRAPH_IO_HPP_
#define BMATCH_GRAPH_IO_HPP_

#include <charconv>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bmatch/error.hpp"
#include "bmatch/graph.hpp"

// Line-oriented text format:
//
//   # comment
//   p bmatch <n> <m>
//   b <v> <cap>        (vertices without a b line get capacity 1)
//   e <u> <v>          (exactly m lines; duplicates are dropped on load)
//
// serialize_instance() writes the header, one b line per vertex and one e line
// per edge in edge-id order. That canonical text survives parse+serialize
// byte for byte.

namespace bmatch {

struct Instance {
  Graph graph;
  CapacityMap capacities;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("parse", "line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::int64_t parse_int(std::string_view w, std::size_t line, const char* what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
  if (ec != std::errc() || ptr != w.data() + w.size()) {
    throw ParseError(line, std::string("expected integer ") + what + ", got '" +
                               std::string(w) + "'");
  }
  return value;
}

}  // namespace detail

inline Instance parse_instance(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  std::int64_t n = 0;
  std::int64_t m = 0;
  CapacityMap caps;
  std::vector<std::pair<Vertex, Vertex>> edges;
  while (std::getline(in, raw)) {
    ++line_no;
    auto words = detail::split_words(raw);
    if (words.empty() || words[0].front() == '#') continue;
    const std::string_view tag = words[0];
    if (tag == "p") {
      if (have_header) throw ParseError(line_no, "duplicate header");
      if (words.size() != 4 || words[1] != "bmatch") {
        throw ParseError(line_no, "header must read 'p bmatch <n> <m>'");
      }
      n = detail::parse_int(words[2], line_no, "vertex count");
      m = detail::parse_int(words[3], line_no, "edge count");
      if (n < 0 || n > std::numeric_limits<Vertex>::max() / 4 || m < 0) {
        throw ParseError(line_no, "header counts out of range");
      }
      caps.assign(static_cast<std::size_t>(n), 1);
      edges.reserve(static_cast<std::size_t>(m));
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "content before 'p bmatch' header");
    if (tag == "b") {
      if (words.size() != 3) throw ParseError(line_no, "expected 'b <v> <cap>'");
      const std::int64_t v = detail::parse_int(words[1], line_no, "vertex");
      const std::int64_t c = detail::parse_int(words[2], line_no, "capacity");
      if (v < 0 || v >= n) throw ParseError(line_no, "vertex out of range");
      if (c < 0) throw ParseError(line_no, "negative capacity");
      caps[static_cast<std::size_t>(v)] = c;
    } else if (tag == "e") {
      if (words.size() != 3) throw ParseError(line_no, "expected 'e <u> <v>'");
      const std::int64_t u = detail::parse_int(words[1], line_no, "vertex");
      const std::int64_t v = detail::parse_int(words[2], line_no, "vertex");
      if (u < 0 || u >= n || v < 0 || v >= n) throw ParseError(line_no, "vertex out of range");
      if (u == v) throw ParseError(line_no, "loop edge");
      edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    } else {
      throw ParseError(line_no, "unknown line tag '" + std::string(tag) + "'");
    }
  }
  if (!have_header) throw ParseError(line_no == 0 ? 1 : line_no, "missing 'p bmatch' header");
  if (static_cast<std::int64_t>(edges.size()) != m) {
    throw ParseError(line_no, "header announces " + std::to_string(m) + " edges, found " +
                                  std::to_string(edges.size()));
  }
  Instance inst;
  inst.graph = build_graph(static_cast<Vertex>(n), edges);
  inst.capacities = std::move(caps);
  try {
    total_capacity(inst.capacities);
  } catch (const Error& e) {
    throw ParseError(line_no, e.what());
  }
  return inst;
}

inline Instance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_instance(in);
}

inline std::string serialize_instance(const Graph& g, const CapacityMap& b) {
  std::string out;
  out += "p bmatch " + std::to_string(g.num_vertices()) + " " + std::to_string(g.num_edges()) + "\n";
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    out += "b " + std::to_string(v) + " " + std::to_string(b[v]) + "\n";
  }
  for (const Edge& e : g.edges()) {
    out += "e " + std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  }
  return out;
}

inline std::string serialize_instance(const Instance& inst) {
  return serialize_instance(inst.graph, inst.capacities);
}

}  // namespace bmatch

#endif  // BMATCH_GRAPH_IO_HPP_
