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

// JSON encodings. Rationals are strings "NUM/DEN" (or "NUM"); label words are
// [[index, value], ...] sorted by index with nonzero values only.

#include <string>
#include <vector>

#include <json.hpp>  // nlohmann, vendored

#include "dlh/kernels.hpp"
#include "dlh/lamplighter.hpp"

namespace dlh {

using Json = nlohmann::json;

inline Json to_json(const LabelWord& w) {
  Json out = Json::array();
  for (const auto& [j, v] : w) out.push_back(Json::array({j, v}));
  return out;
}

inline Json to_json(const Rational& r) { return to_string(r); }

inline Json to_json(const TreeVertex& v) { return {{"level", v.level()}, {"labels", to_json(v.labels())}}; }

inline Json to_json(const TreeEnd& e) {
  if (e.is_omega()) return {{"omega", true}};
  return {{"labels", to_json(e.labels())}};
}

inline Json to_json(const DLVertex& v) { return {{"x1", to_json(v.x1)}, {"x2", to_json(v.x2)}}; }

inline Json to_json(const GroupElement& a) { return {{"k", a.k()}, {"eta", to_json(a.eta())}}; }

inline Json to_json(const BoundaryConfig& xi) {
  return {{"side", xi.side() == BoundarySide::Plus ? "+" : "-"}, {"labels", to_json(xi.labels())}};
}

inline Json to_json(const HarmonicFunction& h) {
  Json terms = Json::array();
  for (const auto& t : h.terms) {
    terms.push_back({{"coefficient", to_json(t.coefficient)}, {"side", to_string(t.spec.side)},
                     {"end", to_json(t.spec.end)}});
  }
  return {{"alpha", to_json(h.alpha)}, {"q", h.params.q},         {"r", h.params.r},
          {"constant", to_json(h.constant)}, {"terms", terms}, {"minimal", h.minimal}};
}

/// Compact single-line dump.
inline std::string dump(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::strict); }

namespace detail {

template <class Fn>
auto parsing(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw InvalidParameter(std::string("malformed ") + what + ": " + e.what());
  }
}

inline std::vector<LabelEntry> label_entries(const Json& j) {
  std::vector<LabelEntry> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw InvalidParameter("label entry must be [index, value]");
    out.emplace_back(e[0].get<Level>(), e[1].get<int>());
  }
  return out;
}

}  // namespace detail

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw InvalidParameter("rational must be a \"NUM/DEN\" string");
}

inline TreeVertex tree_vertex_from_json(const Json& j) {
  return detail::parsing("tree vertex", [&] {
    return TreeVertex(j.at("level").get<Level>(), detail::label_entries(j.value("labels", Json::array())));
  });
}

inline TreeEnd tree_end_from_json(const Json& j) {
  return detail::parsing("tree end", [&] {
    if (j.value("omega", false)) return TreeEnd::omega();
    return TreeEnd::word(detail::label_entries(j.at("labels")));
  });
}

inline DLVertex dl_vertex_from_json(const Json& j) {
  return detail::parsing("DL vertex",
                         [&] { return DLVertex{tree_vertex_from_json(j.at("x1")), tree_vertex_from_json(j.at("x2"))}; });
}

inline GroupElement group_element_from_json(const Json& j, int q) {
  return detail::parsing("group element", [&] {
    return GroupElement(j.value("q", q), detail::label_entries(j.value("eta", Json::array())),
                        j.value("k", std::int64_t{0}));
  });
}

inline BoundaryConfig boundary_config_from_json(const Json& j, int q) {
  return detail::parsing("boundary configuration", [&] {
    const auto side = j.at("side").get<std::string>();
    if (side != "+" && side != "-") throw InvalidParameter("side must be \"+\" or \"-\"");
    return BoundaryConfig(side == "+" ? BoundarySide::Plus : BoundarySide::Minus, q,
                          detail::label_entries(j.value("labels", Json::array())));
  });
}

inline Side side_from_string(const std::string& s) {
  if (s == "first" || s == "1") return Side::First;
  if (s == "second" || s == "2") return Side::Second;
  throw InvalidParameter("side must be first or second");
}

/// {"alpha", "q", "r", "constant"?, "terms": [{"coefficient", "side", "end"}]}.
inline HarmonicFunction harmonic_function_from_json(const Json& j) {
  return detail::parsing("harmonic function", [&] {
    const Rational alpha = require_alpha(rational_from_json(j.at("alpha")));
    const DLParams p(j.at("q").get<int>(), j.at("r").get<int>());
    std::vector<HarmonicTerm> terms;
    for (const auto& t : j.value("terms", Json::array())) {
      terms.push_back({rational_from_json(t.value("coefficient", Json("1"))),
                       KernelSpec{side_from_string(t.at("side").get<std::string>()), tree_end_from_json(t.at("end")),
                                  alpha, p}});
    }
    const Rational c = j.contains("constant") ? rational_from_json(j.at("constant")) : Rational(0);
    if (terms.size() == 1 && c == 0 && terms[0].coefficient == 1) return minimal_kernel(terms[0].spec);
    return combine(alpha, p, terms, c);
  });
}

}  // namespace dlh
