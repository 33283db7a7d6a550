// Copyright 2026 The dl-harmonics Authors
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

#pragma once

// dl-harmonics command-line front end. run() is separate from main() so the
// test suite can drive it with captured streams.
//
// Exit codes: 0 all requested checks pass, 1 a check failed (a failure JSON
// object is printed), 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dlh/dlh.hpp"

namespace dlh::cli {

struct RunConfig {
  int q = 2;
  int r = 2;
  std::string alpha = "1/2";
  int n = 1;
  std::uint64_t seed = 0;
  int radius = 3;
  std::size_t samples = 300;
  std::size_t trials = 10000;
  std::size_t horizon = 1000;
  std::size_t steps = 10;
  std::string side = "first";
  std::string end = R"({"omega":true})";
  std::string at = R"({"level":0,"labels":[]})";
  std::string spec;
  std::string walk = "p-alpha";
  std::string start;
  std::string from;
  std::string to;
  std::string model = "walk-switch";
  std::string element = R"({"k":0,"eta":[]})";
  std::string xi = R"({"side":"+","labels":[]})";
  std::string variant = "dl";
  std::string format = "dot";
  std::string out;
  bool check_product = false;
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

// Inline JSON if it starts with '{' or '[', otherwise a file path.
inline Json load_json(const std::string& text, const char* what) {
  if (text.empty()) throw UsageError(std::string("missing ") + what);
  std::string body = text;
  if (text.front() != '{' && text.front() != '[') {
    std::ifstream in(text);
    if (!in) throw UsageError(std::string("cannot read ") + what + " file " + text);
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return Json::parse(body);
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed JSON for ") + what + ": " + e.what());
  }
}

inline void emit(std::ostream& out, const Json& j) { out << dump(j) << '\n'; }

inline void write_artifact(const std::string& path, const std::string& body, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << body;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << body;
}

inline GeneratorModel parse_model(const std::string& m) {
  if (m == "walk-switch") return GeneratorModel::WalkSwitch;
  if (m == "walk-or-switch") return GeneratorModel::WalkOrSwitch;
  if (m == "switch-walk-switch") return GeneratorModel::SwitchWalkSwitch;
  throw UsageError("model must be walk-switch, walk-or-switch or switch-walk-switch");
}

// Appends flags from a JSON config file for every key not already given.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (path.empty()) return kept;
  const Json cfg = load_json(path, "config");
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  std::set<std::string> given;
  for (const auto& a : kept) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos
                                                                                          : a.find('=') - 2));
  }
  for (const auto& [key, value] : cfg.items()) {
    if (given.contains(key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) kept.push_back("--" + key);
      continue;
    }
    kept.push_back("--" + key);
    kept.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return kept;
}

inline std::vector<TreeVertex> tree_ball_root(int radius, int b) { return ball(TreeVertex::root(), radius, TreeParams(b)); }

}  // namespace detail

inline int kernel_eval(const RunConfig& c, std::ostream& out) {
  const DLParams p(c.q, c.r);
  const Rational alpha = require_alpha(parse_rational(c.alpha));
  const Side side = side_from_string(c.side);
  const TreeEnd xi = tree_end_from_json(detail::load_json(c.end, "end"));
  const Json at = detail::load_json(c.at, "vertex");
  TreeVertex x;
  if (at.contains("x1")) {
    const DLVertex v = dl_vertex_from_json(at);
    validate(v, p);
    x = side_vertex(side, v);
  } else {
    x = tree_vertex_from_json(at);
  }
  out << to_string(martin_kernel_tree(side, x, xi, alpha, p)) << '\n';
  return 0;
}

inline int harmonic_check(const RunConfig& c, std::ostream& out) {
  const HarmonicFunction h = harmonic_function_from_json(detail::load_json(c.spec, "spec"));
  const DLWalk op = p_alpha(h.params, h.alpha);
  const auto ballv = dl_ball(c.radius, h.params);
  std::vector<DLVertex> sample;
  if (c.samples >= ballv.size()) {
    sample = ballv;
  } else {
    for (std::size_t i = 0; i < c.samples; ++i) sample.push_back(ballv[SplitMix64::stream(c.seed, i).below(ballv.size())]);
  }
  const auto f = evaluator(h);
  const auto bad = first_non_harmonic(op, f, sample);
  Json report{{"check", "harmonic"}, {"checked", sample.size()}, {"radius", c.radius}, {"pass", !bad}};
  if (bad) {
    report["counterexample"] = {{"vertex", to_json(*bad)}, {"h", to_json(f(*bad))}, {"Ph", to_json(apply(op, f, *bad))}};
  }
  detail::emit(out, report);
  return bad ? 1 : 0;
}

inline int dirichlet_solve(const RunConfig& c, std::ostream& out) {
  const DLParams p(c.q, c.r);
  const Rational alpha = require_alpha(parse_rational(c.alpha));
  const DLTruncation s = build_truncation(c.n, p, alpha);
  const auto table = hitting_table(s, p_alpha(p, alpha));
  bool rows_ok = true;
  for (const auto& row : table.F) {
    Rational sum(0);
    for (const auto& x : row) sum += x;
    rows_ok = rows_ok && sum == 1;
  }
  Json report{{"q", c.q},
              {"r", c.r},
              {"alpha", to_string(alpha)},
              {"n", c.n},
              {"vertices", s.vertices.size()},
              {"boundary", s.boundary.size()},
              {"interior", s.interior.size()},
              {"rows_sum_to_one", rows_ok}};
  bool pass = rows_ok;
  if (c.check_product) {
    const auto rep = verify_product_formula(s, table, alpha);
    Json bad = Json::array();
    for (const auto& d : rep.discrepancies) {
      bad.push_back({{"x", to_json(d.x)}, {"y", to_json(d.y)}, {"F", to_json(d.dl_value)}, {"tree", to_json(d.tree_value)}});
    }
    report["product_formula"] = {{"checked", rep.checked}, {"discrepancies", bad}};
    pass = pass && rep.ok();
  }
  report["pass"] = pass;
  if (!c.out.empty()) detail::write_artifact(c.out, dump(to_json(table)) + "\n", out);
  detail::emit(out, report);
  return pass ? 0 : 1;
}

inline int decompose_cmd(const RunConfig& c, std::ostream& out) {
  const HarmonicFunction h = harmonic_function_from_json(detail::load_json(c.spec, "spec"));
  Decomposition d;
  try {
    d = decompose(evaluator(h), c.n, h.params, h.alpha);
  } catch (const PreconditionViolation& e) {
    detail::emit(out, {{"pass", false}, {"error", e.what()}, {"witness", Json::parse(e.witness)}});
    return 1;
  }
  auto part = [](const TreeTruncation& t, const std::vector<Rational>& v) {
    Json a = Json::array();
    for (std::size_t i = 0; i < v.size(); ++i) a.push_back({{"vertex", to_json(t.vertices[i])}, {"value", to_json(v[i])}});
    return a;
  };
  auto weights = [](const TreeTruncation& t, const std::vector<std::optional<Rational>>& l) {
    Json a = Json::array();
    for (std::size_t j = 0; j < l.size(); ++j) {
      a.push_back({{"vertex", to_json(t.vertices[t.boundary[j]])}, {"lambda", l[j] ? to_json(*l[j]) : Json(nullptr)}});
    }
    return a;
  };
  detail::emit(out, {{"pass", true},
                     {"n", c.n},
                     {"reconstruction", "exact"},
                     {"h1", part(d.s1, d.h1)},
                     {"h2", part(d.s2, d.h2)},
                     {"lambda1", weights(d.s1, d.lambda1)},
                     {"lambda2", weights(d.s2, d.lambda2)}});
  return 0;
}

namespace detail {

inline bool is_tree_walk(const std::string& w) { return w == "p1" || w == "p2"; }

inline DLWalk dl_walk(const std::string& w, const DLParams& p, const Rational& alpha) {
  if (w == "p-alpha") return p_alpha(p, alpha);
  if (w == "q-alpha") return q_alpha(p, alpha);
  throw UsageError("walk must be p-alpha, q-alpha, p1 or p2");
}

inline TreeWalk tree_walk(const std::string& w, const DLParams& p, const Rational& alpha) {
  return w == "p1" ? p1(p, alpha) : p2(p, alpha);
}

inline std::string default_vertex(const std::string& w) {
  return is_tree_walk(w) ? R"({"level":0,"labels":[]})"
                         : R"({"x1":{"level":0,"labels":[]},"x2":{"level":0,"labels":[]}})";
}

}  // namespace detail

inline int simulate_cmd(const RunConfig& c, std::ostream& out) {
  const DLParams p(c.q, c.r);
  const Rational alpha = require_alpha(parse_rational(c.alpha));
  const Json start = detail::load_json(c.start.empty() ? detail::default_vertex(c.walk) : c.start, "start");
  auto emit_all = [&](const auto& traj) {
    detail::emit(out, to_json(traj.start));
    for (const auto& v : traj.steps) detail::emit(out, to_json(v));
  };
  if (detail::is_tree_walk(c.walk)) {
    const auto op = detail::tree_walk(c.walk, p, alpha);
    const TreeVertex x = tree_vertex_from_json(start);
    validate(x, TreeParams(op.branching()));
    emit_all(simulate(op, x, c.steps, c.seed));
  } else {
    const auto op = detail::dl_walk(c.walk, p, alpha);
    const DLVertex x = dl_vertex_from_json(start);
    validate(x, p);
    emit_all(simulate(op, x, c.steps, c.seed));
  }
  return 0;
}

inline int estimate_f_cmd(const RunConfig& c, std::ostream& out) {
  const DLParams p(c.q, c.r);
  const Rational alpha = require_alpha(parse_rational(c.alpha));
  const Json from = detail::load_json(c.from.empty() ? detail::default_vertex(c.walk) : c.from, "from");
  const Json to = detail::load_json(c.to, "to");
  EstimateResult r;
  if (detail::is_tree_walk(c.walk)) {
    const auto op = detail::tree_walk(c.walk, p, alpha);
    const TreeVertex x = tree_vertex_from_json(from), y = tree_vertex_from_json(to);
    validate(x, TreeParams(op.branching()));
    validate(y, TreeParams(op.branching()));
    r = estimate_F(op, x, y, c.trials, c.horizon, c.seed, EscapeBound<TreeVertex>(tree_escape_certificate(op, y)));
  } else {
    const auto op = detail::dl_walk(c.walk, p, alpha);
    const DLVertex x = dl_vertex_from_json(from), y = dl_vertex_from_json(to);
    validate(x, p);
    validate(y, p);
    r = estimate_F(op, x, y, c.trials, c.horizon, c.seed);
  }
  detail::emit(out, {{"estimate", true},
                     {"confidence", 0.95},
                     {"point_estimate", r.point_estimate},
                     {"half_width_95", r.half_width_95},
                     {"trials", r.trials},
                     {"horizon", r.horizon},
                     {"truncated_runs", r.truncated_runs},
                     {"escaped_runs", r.escaped_runs},
                     {"hits", r.hits}});
  return 0;
}

/// All elements with |k| <= radius and support in [-radius, radius].
inline std::vector<GroupElement> group_box(int q, int radius) {
  std::vector<GroupElement> out;
  const int width = 2 * radius + 1;
  std::size_t configs = 1;
  for (int i = 0; i < width; ++i) configs *= static_cast<std::size_t>(q);
  for (int k = -radius; k <= radius; ++k) {
    for (std::size_t code = 0; code < configs; ++code) {
      std::vector<LabelEntry> eta;
      std::size_t rest = code;
      for (int pos = -radius; pos <= radius; ++pos, rest /= static_cast<std::size_t>(q)) {
        eta.emplace_back(pos, static_cast<int>(rest % static_cast<std::size_t>(q)));
      }
      out.emplace_back(q, std::move(eta), k);
    }
  }
  return out;
}

struct CayleyReport {
  std::size_t elements = 0;
  bool bijection = true;
  std::size_t adjacency_checked = 0;
  std::vector<GroupElement> mismatches;
  bool ok() const { return bijection && mismatches.empty(); }
};

/// encode/decode round trips and generator translates against DL adjacency.
inline CayleyReport cayley_check(int q, int radius, GeneratorModel m) {
  if (m == GeneratorModel::WalkOrSwitch) throw UsageError("walk-or-switch has no DL counterpart");
  const DLParams p(q, q);
  CayleyReport rep;
  const auto box = group_box(q, radius);
  rep.elements = box.size();
  std::set<DLVertex> images;
  for (const auto& a : box) {
    const DLVertex v = encode(a);
    images.insert(v);
    if (decode(v, p) != a) rep.bijection = false;
    std::vector<DLVertex> via_group;
    for (const auto& b : cayley_neighbours(a, m)) via_group.push_back(encode(b));
    auto via_graph = m == GeneratorModel::WalkSwitch ? dl_neighbours(v, p) : dls_neighbours(v, p);
    std::sort(via_group.begin(), via_group.end());
    std::sort(via_graph.begin(), via_graph.end());
    ++rep.adjacency_checked;
    if (via_group != via_graph) rep.mismatches.push_back(a);
  }
  if (images.size() != box.size()) rep.bijection = false;
  return rep;
}

inline int cayley_check_cmd(const RunConfig& c, std::ostream& out) {
  const auto rep = cayley_check(c.q, c.radius, detail::parse_model(c.model));
  Json bad = Json::array();
  for (const auto& a : rep.mismatches) bad.push_back(to_json(a));
  detail::emit(out, {{"check", "cayley"},
                     {"model", c.model},
                     {"q", c.q},
                     {"elements", rep.elements},
                     {"bijection", rep.bijection},
                     {"adjacency_checked", rep.adjacency_checked},
                     {"mismatches", bad},
                     {"pass", rep.ok()}});
  return rep.ok() ? 0 : 1;
}

inline int defect_cmd(const RunConfig& c, std::ostream& out) {
  const GeneratorModel m = detail::parse_model(c.model);
  const GroupElement a = group_element_from_json(detail::load_json(c.element, "element"), c.q);
  const BoundaryConfig xi = boundary_config_from_json(detail::load_json(c.xi, "xi"), a.q());
  Json report{{"element", to_json(a)}, {"xi", to_json(xi)}, {"model", c.model}};
  if (xi.side() == BoundarySide::Plus) {
    report["df_plus"] = defect_plus(a, xi);
    report["df_oplus"] = defect_oplus(a, xi);
  } else {
    report["df_minus"] = defect_minus(a, xi);
  }
  report["kernel"] = to_json(defect_kernel(m, a, xi));
  detail::emit(out, report);
  return 0;
}

inline std::string dot_escape(const std::string& s) {
  std::string o;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') o += '\\';
    o += ch;
  }
  return o;
}

inline int graph_export(const RunConfig& c, std::ostream& out) {
  if (c.variant != "dl" && c.variant != "dls") throw UsageError("variant must be dl or dls");
  if (c.format != "dot" && c.format != "json") throw UsageError("format must be dot or json");
  const DLParams p(c.q, c.r);
  const bool sib = c.variant == "dls";
  const auto verts = dl_ball(c.radius, p, sib);
  std::unordered_map<DLVertex, std::size_t> index;
  for (std::size_t i = 0; i < verts.size(); ++i) index.emplace(verts[i], i);
  std::vector<std::vector<std::size_t>> adj(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (const auto& w : sib ? dls_neighbours(verts[i], p) : dl_neighbours(verts[i], p)) {
      if (auto it = index.find(w); it != index.end()) adj[i].push_back(it->second);
    }
    std::sort(adj[i].begin(), adj[i].end());
  }
  std::ostringstream body;
  if (c.format == "dot") {
    body << "graph " << (sib ? "DLs" : "DL") << " {\n";
    for (std::size_t i = 0; i < verts.size(); ++i) {
      body << "  v" << i << " [label=\"" << dot_escape(dump(to_json(verts[i]))) << "\"];\n";
    }
    for (std::size_t i = 0; i < verts.size(); ++i) {
      for (auto j : adj[i]) {
        if (i < j) body << "  v" << i << " -- v" << j << ";\n";
      }
    }
    body << "}\n";
  } else {
    Json vs = Json::array(), as = Json::array();
    for (const auto& v : verts) vs.push_back(to_json(v));
    for (const auto& a : adj) as.push_back(a);
    body << dump({{"variant", c.variant}, {"q", c.q}, {"r", c.r}, {"radius", c.radius}, {"vertices", vs},
                  {"adjacency", as}})
         << '\n';
  }
  detail::write_artifact(c.out, body.str(), out);
  return 0;
}

/// args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Harmonic functions and random walks on Diestel-Leader graphs", "dl-harmonics"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* s) {
    s->add_option("--q", c.q, "branching of the first tree")->check(CLI::PositiveNumber);
    s->add_option("--r", c.r, "branching of the second tree")->check(CLI::PositiveNumber);
    s->add_option("--alpha", c.alpha, "alpha as NUM/DEN");
    s->add_option("--seed", c.seed, "random seed");
  };
  auto* kernel = app.add_subcommand("kernel-eval", "evaluate a tree Martin kernel");
  common(kernel);
  kernel->add_option("--side", c.side, "first or second");
  kernel->add_option("--end", c.end, "tree end JSON");
  kernel->add_option("--at", c.at, "tree or DL vertex JSON");

  auto* harmonic = app.add_subcommand("harmonic-check", "check P_alpha-harmonicity of a kernel combination");
  common(harmonic);
  harmonic->add_option("--spec", c.spec, "harmonic function JSON or file")->required();
  harmonic->add_option("--samples", c.samples, "number of sampled vertices");
  harmonic->add_option("--radius", c.radius, "sampling ball radius");

  auto* dirichlet = app.add_subcommand("dirichlet-solve", "solve the hitting problem on S^(n)");
  common(dirichlet);
  dirichlet->add_option("--n", c.n, "truncation depth");
  dirichlet->add_flag("--check-product", c.check_product, "verify the product formula");
  dirichlet->add_option("--out", c.out, "write the table JSON here");

  auto* decomp = app.add_subcommand("decompose", "split a harmonic function on S^(n) as h1 + h2");
  common(decomp);
  decomp->add_option("--spec", c.spec, "harmonic function JSON or file")->required();
  decomp->add_option("--n", c.n, "truncation depth");

  auto* sim = app.add_subcommand("simulate", "sample a trajectory (JSON lines)");
  common(sim);
  sim->add_option("--walk", c.walk, "p-alpha, q-alpha, p1 or p2");
  sim->add_option("--start", c.start, "start vertex JSON");
  sim->add_option("--steps", c.steps, "number of steps");

  auto* est = app.add_subcommand("estimate-f", "Monte-Carlo estimate of F(x, y)");
  common(est);
  est->add_option("--walk", c.walk, "p-alpha, q-alpha, p1 or p2");
  est->add_option("--from", c.from, "start vertex JSON");
  est->add_option("--to", c.to, "target vertex JSON")->required();
  est->add_option("--trials", c.trials, "number of trials");
  est->add_option("--horizon", c.horizon, "steps per trial");

  auto* cayley = app.add_subcommand("cayley-check", "compare the lamplighter Cayley graph with DL(q,q)");
  common(cayley);
  cayley->add_option("--model", c.model, "walk-switch or switch-walk-switch");
  cayley->add_option("--radius", c.radius, "bound on |k| and on the support");

  auto* defect = app.add_subcommand("defect", "defects and defect kernels on the lamplighter group");
  common(defect);
  defect->add_option("--model", c.model, "walk-switch or switch-walk-switch");
  defect->add_option("--element", c.element, "group element JSON");
  defect->add_option("--xi", c.xi, "boundary configuration JSON");

  auto* graph = app.add_subcommand("graph-export", "export a ball of DL or DL^s");
  common(graph);
  graph->add_option("--radius", c.radius, "ball radius");
  graph->add_option("--variant", c.variant, "dl or dls");
  graph->add_option("--format", c.format, "dot or json");
  graph->add_option("--out", c.out, "output file");

  try {
    args = detail::merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (kernel->parsed()) return kernel_eval(c, out);
    if (harmonic->parsed()) return harmonic_check(c, out);
    if (dirichlet->parsed()) return dirichlet_solve(c, out);
    if (decomp->parsed()) return decompose_cmd(c, out);
    if (sim->parsed()) return simulate_cmd(c, out);
    if (est->parsed()) return estimate_f_cmd(c, out);
    if (cayley->parsed()) return cayley_check_cmd(c, out);
    if (defect->parsed()) return defect_cmd(c, out);
    if (graph->parsed()) return graph_export(c, out);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const SizeCapExceeded& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    detail::emit(out, {{"pass", false}, {"error", e.what()}});
    return 1;
  }
  return 2;
}

}  // namespace dlh::cli
