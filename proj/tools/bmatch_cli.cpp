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

// bmatch: solve, decompose, verify, gen and bench on the line-oriented graph
// format. Exit codes: 0 ok, 1 verification failure or unusable input,
// 2 parse error, 3 resource budget exceeded.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bmatch/bmatch.hpp"

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;

bmatch::Instance load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bmatch::Error("io", "cannot open " + path);
  return bmatch::parse_instance(in);
}

// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw bmatch::Error("io", "cannot write " + path);
  out << text;
}

bmatch::SolveMode parse_mode(const std::string& m) {
  if (m == "kernel") return bmatch::SolveMode::kKernel;
  if (m == "splitdp") return bmatch::SolveMode::kSplitDp;
  return bmatch::SolveMode::kAuto;
}

// "1024,4096" or "2^10..2^16" (every power in between).
std::vector<bmatch::Vertex> parse_sizes(const std::string& spec) {
  std::vector<bmatch::Vertex> out;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    auto power = [](const std::string& s) {
      if (s.rfind("2^", 0) != 0) throw bmatch::Error("usage", "ranges take the form 2^a..2^b");
      return std::stoi(s.substr(2));
    };
    const int lo = power(spec.substr(0, dots));
    const int hi = power(spec.substr(dots + 2));
    if (lo < 1 || hi > 24 || lo > hi) throw bmatch::Error("usage", "size range out of bounds");
    for (int e = lo; e <= hi; ++e) out.push_back(bmatch::Vertex{1} << e);
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<bmatch::Vertex>(std::stol(item)));
  return out;
}

bmatch::Graph generate(const std::string& family, bmatch::Vertex n, bmatch::Vertex k, std::uint64_t seed) {
  if (family == "dh") return bmatch::gen_distance_hereditary(n, seed);
  if (family == "swk") return bmatch::gen_bounded_splitwidth(k, n, seed);
  throw bmatch::Error("usage", "unknown family '" + family + "' (expected dh or swk)");
}

int cmd_solve(const std::string& path, const std::string& mode, bool maxmatching, const std::string& out,
              bool timings) {
  const bmatch::Instance inst = load(path);
  bmatch::SolverConfig cfg;
  cfg.mode = parse_mode(mode);
  const bmatch::SolveResult r =
      maxmatching ? bmatch::solve_maximum_matching(inst.graph, cfg)
                  : bmatch::solve_bmatching(inst.graph, inst.capacities, cfg);
  emit(out, bmatch::result_to_json(inst.graph, r, timings).dump(2) + "\n");
  return 0;
}

int cmd_decompose(const std::string& path, const std::string& dot) {
  const bmatch::Instance inst = load(path);
  const bmatch::SplitTree t = bmatch::decompose_minimal(inst.graph);
  std::string text;
  for (std::size_t i = 0; i < t.components.size(); ++i) {
    const auto& c = t.components[i];
    text += "c " + std::to_string(i) + " " + std::to_string(c.order());
    for (bmatch::Vertex label : c.labels) text += " " + bmatch::label_name(t, label);
    text += "\n";
  }
  for (const auto& e : t.edges) {
    text += "t " + std::to_string(e.parent) + " " + std::to_string(e.child) + " " +
            bmatch::label_name(t, e.parent_marker) + " " + bmatch::label_name(t, e.child_marker) + "\n";
  }
  std::cout << text;
  if (!dot.empty()) {
    std::string d = "graph split_tree {\n";
    for (std::size_t i = 0; i < t.components.size(); ++i) {
      d += "  c" + std::to_string(i) + " [label=\"";
      for (std::size_t j = 0; j < t.components[i].labels.size(); ++j) {
        d += (j ? " " : "") + bmatch::label_name(t, t.components[i].labels[j]);
      }
      d += "\"];\n";
    }
    for (const auto& e : t.edges) {
      d += "  c" + std::to_string(e.parent) + " -- c" + std::to_string(e.child) + ";\n";
    }
    d += "}\n";
    emit(dot, d);
  }
  return 0;
}

int cmd_verify(const std::string& graph_path, const std::string& result_path) {
  const bmatch::Instance inst = load(graph_path);
  std::ifstream in(result_path);
  if (!in) throw bmatch::Error("io", "cannot open " + result_path);
  const bmatch::ResultDocument doc = bmatch::parse_result(in);
  const bmatch::ValidationReport rep = bmatch::verify_result(inst.graph, inst.capacities, doc);
  if (!rep) {
    std::cerr << "invalid: " << rep.message << "\n";
    return kExitVerify;
  }
  std::cout << "ok cardinality " << doc.cardinality << "\n";
  return 0;
}

int cmd_gen(const std::string& family, bmatch::Vertex n, bmatch::Vertex k, std::uint64_t seed, std::int64_t bmax,
            const std::string& out) {
  const bmatch::Graph g = generate(family, n, k, seed);
  std::string text;
  if (bmax > 0) {
    text = bmatch::serialize_instance(g, bmatch::gen_capacities(g.num_vertices(), bmax, seed ^ 0x5bd1e995ULL));
  } else {
    text = "p bmatch " + std::to_string(g.num_vertices()) + " " + std::to_string(g.num_edges()) + "\n";
    for (const auto& e : g.edges()) text += "e " + std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  }
  emit(out, text);
  return 0;
}

int cmd_bench(const std::string& family, bmatch::Vertex k, const std::string& sizes, int reps, std::uint64_t seed,
              std::int64_t bmax, const std::string& out) {
  std::string csv =
      "family,n,m,k,rep,decompose_ms,phase1_ms,phase2_ms,merge_ms,total_ms,kernel_calls,cardinality\n";
  std::vector<double> xs;
  std::vector<double> ys;
  for (bmatch::Vertex n : parse_sizes(sizes)) {
    const bmatch::Graph g = generate(family, n, k, seed + static_cast<std::uint64_t>(n));
    const bmatch::CapacityMap b = bmax > 1 ? bmatch::gen_capacities(g.num_vertices(), bmax, seed)
                                           : bmatch::CapacityMap(g.num_vertices(), 1);
    double best = 0;
    for (int rep = 0; rep < reps; ++rep) {
      bmatch::SolverConfig cfg;
      cfg.mode = bmatch::SolveMode::kSplitDp;
      const auto t0 = std::chrono::steady_clock::now();
      const bmatch::SolveResult r = bmatch::solve_bmatching(g, b, cfg);
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      if (!bmatch::validate_bmatching(g, b, r.matching) || bmatch::cardinality(r.matching) != r.cardinality) {
        throw bmatch::Error("internal", "bench solution failed validation");
      }
      best = rep == 0 ? ms : std::min(best, ms);
      char row[256];
      std::snprintf(row, sizeof row, "%s,%d,%d,%d,%d,%.3f,%.3f,%.3f,%.3f,%.3f,%lld,%lld\n", family.c_str(),
                    g.num_vertices(), g.num_edges(), r.stats.split_width, rep, r.stats.decompose_ms,
                    r.stats.phase1_ms, r.stats.phase2_ms, r.stats.merge_ms, ms,
                    static_cast<long long>(r.stats.kernel_calls_phase1 + r.stats.kernel_calls_phase2 +
                                           r.stats.kernel_calls_direct),
                    static_cast<long long>(r.cardinality));
      csv += row;
    }
    xs.push_back(static_cast<double>(g.num_vertices() + g.num_edges()));
    ys.push_back(std::max(best, 1e-3));
  }
  if (xs.size() >= 2) {
    char line[64];
    std::snprintf(line, sizeof line, "# slope %.4f\n", bmatch::loglog_slope(xs, ys));
    csv += line;
  }
  emit(out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"b-matching on graphs of bounded split-width"};
  app.require_subcommand(1);

  std::string graph_path;
  std::string result_path;
  std::string mode = "auto";
  std::string out;
  std::string dot;
  std::string family = "dh";
  std::string sizes = "2^10..2^16";
  bool maxmatching = false;
  bool timings = false;
  bmatch::Vertex n = 100;
  bmatch::Vertex k = 5;
  std::uint64_t seed = 1;
  std::int64_t bmax = 0;
  int reps = 1;

  auto* solve = app.add_subcommand("solve", "maximum b-matching of a graph file");
  solve->add_option("graph", graph_path, "graph file")->required();
  solve->add_option("--mode", mode, "auto, kernel or splitdp")
      ->check(CLI::IsMember({"auto", "kernel", "splitdp"}));
  solve->add_flag("--maxmatching", maxmatching, "ignore capacities and use b = 1");
  solve->add_option("--out", out, "result file (default stdout)");
  solve->add_flag("--timings", timings, "include per-phase wall times");

  auto* decompose = app.add_subcommand("decompose", "print the minimal split decomposition");
  decompose->add_option("graph", graph_path, "graph file")->required();
  decompose->add_option("--dot", dot, "also write the tree in dot format");

  auto* verify = app.add_subcommand("verify", "check a result document against a graph file");
  verify->add_option("graph", graph_path, "graph file")->required();
  verify->add_option("result", result_path, "result document")->required();

  auto* gen = app.add_subcommand("gen", "write a generated graph");
  gen->add_option("--family", family, "dh or swk")->check(CLI::IsMember({"dh", "swk"}));
  gen->add_option("--n", n, "target vertex count")->check(CLI::Range(2, 1 << 24));
  gen->add_option("--k", k, "split-width bound for swk")->check(CLI::Range(3, 1 << 16));
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--bmax", bmax, "random capacities in 0..bmax (default: none, i.e. b = 1)");
  gen->add_option("--out", out, "graph file (default stdout)");

  auto* bench = app.add_subcommand("bench", "time the split-tree solver over a size range");
  bench->add_option("--family", family, "dh or swk")->check(CLI::IsMember({"dh", "swk"}));
  bench->add_option("--k", k, "split-width bound for swk")->check(CLI::Range(3, 1 << 16));
  bench->add_option("--sizes", sizes, "2^a..2^b or a comma list");
  bench->add_option("--reps", reps, "repetitions per size")->check(CLI::Range(1, 1000));
  bench->add_option("--seed", seed, "random seed");
  bench->add_option("--bmax", bmax, "random capacities in 0..bmax (default b = 1)");
  bench->add_option("--out", out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every usage error counts as a parse error.
    return app.exit(e) == 0 ? 0 : kExitParse;
  }

  try {
    if (*solve) return cmd_solve(graph_path, mode, maxmatching, out, timings);
    if (*decompose) return cmd_decompose(graph_path, dot);
    if (*verify) return cmd_verify(graph_path, result_path);
    if (*gen) return cmd_gen(family, n, k, seed, bmax, out);
    if (*bench) return cmd_bench(family, k, sizes, reps, seed, bmax, out);
  } catch (const bmatch::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == "parse") return kExitParse;
    if (e.code() == "kernel-budget" || e.code() == "oracle-budget") return kExitBudget;
    return kExitVerify;
  } catch (const std::exception& e) {
    // Malformed numeric options (std::stol) and json errors end up here.
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerify;
  }
  return 0;
}
