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

// The homogeneous tree T_q with root o and reference end omega.
//
// Coordinates. Every edge of T_q carries a label in Z_q such that all edges on
// the ray from omega to o carry 0, and the q successors of any vertex are
// reached through the q distinct labels. A vertex is stored as its horocycle
// index `level` together with the labels of the edges on its ray towards omega,
// keyed by absolute horocycle index: labels(j) is the label of the edge from
// H_{j-1} into H_j. Only nonzero labels are stored, so the representation is
// canonical. In particular o = (0, {}).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dlh/errors.hpp"

namespace dlh {

using Level = std::int64_t;
using LabelEntry = std::pair<Level, int>;
/// Sorted by index, values nonzero.
using LabelWord = std::vector<LabelEntry>;

namespace detail {

inline int word_at(const LabelWord& w, Level j) {
  auto it = std::lower_bound(w.begin(), w.end(), j,
                             [](const LabelEntry& e, Level k) { return e.first < k; });
  return (it != w.end() && it->first == j) ? it->second : 0;
}

inline LabelWord word_up_to(const LabelWord& w, Level max_index) {
  auto it = std::upper_bound(w.begin(), w.end(), max_index,
                             [](Level k, const LabelEntry& e) { return k < e.first; });
  return LabelWord(w.begin(), it);
}

// Smallest index j <= bound where the two words disagree.
inline std::optional<Level> first_mismatch(const LabelWord& a, const LabelWord& b, Level bound) {
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    const Level ja = ia != a.end() ? ia->first : bound + 1;
    const Level jb = ib != b.end() ? ib->first : bound + 1;
    const Level j = std::min(ja, jb);
    if (j > bound) return std::nullopt;
    const int va = ja == j ? ia->second : 0;
    const int vb = jb == j ? ib->second : 0;
    if (va != vb) return j;
    if (ja == j) ++ia;
    if (jb == j) ++ib;
  }
  return std::nullopt;
}

// Builds a canonical word from arbitrary (index, value) pairs; later entries win.
inline LabelWord canonical_word(std::vector<LabelEntry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const LabelEntry& x, const LabelEntry& y) { return x.first < y.first; });
  LabelWord out;
  for (const auto& e : entries) {
    if (!out.empty() && out.back().first == e.first) {
      out.back().second = e.second;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const LabelEntry& e) { return e.second == 0; });
  return out;
}

inline void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace detail

struct TreeParams {
  int q = 2;

  explicit TreeParams(int branching = 2) : q(branching) {
    if (q < 2) throw InvalidParameter("tree branching must be at least 2");
  }
};

class TreeVertex {
 public:
  TreeVertex() = default;

  /// Throws InvalidVertex if a key exceeds level or a value is negative.
  /// Zero values are dropped.
  TreeVertex(Level level, std::vector<LabelEntry> labels) : level_(level) {
    for (const auto& [j, v] : labels) {
      if (v < 0) throw InvalidVertex("negative label");
      if (v != 0 && j > level) {
        throw InvalidVertex("label index " + std::to_string(j) + " above level " +
                            std::to_string(level));
      }
    }
    labels_ = detail::canonical_word(std::move(labels));
  }

  static TreeVertex root() { return {}; }

  Level level() const { return level_; }
  const LabelWord& labels() const { return labels_; }
  int label_at(Level j) const { return j > level_ ? 0 : detail::word_at(labels_, j); }
  /// Label of the edge from the predecessor into this vertex.
  int top_label() const { return label_at(level_); }

  friend auto operator<=>(const TreeVertex&, const TreeVertex&) = default;
  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;

 private:
  struct Trusted {};
  TreeVertex(Trusted, Level level, LabelWord labels) : level_(level), labels_(std::move(labels)) {}

  friend TreeVertex predecessor(const TreeVertex&);
  friend TreeVertex successor(const TreeVertex&, int, const TreeParams&);
  friend TreeVertex shift(const TreeVertex&, Level);
  friend TreeVertex truncate_to(const TreeVertex&, Level);

  Level level_ = 0;
  LabelWord labels_;
};

/// Either the reference end omega or an end of the boundary minus omega, given
/// by its full label word (zero outside a finite set).
class TreeEnd {
 public:
  struct Omega {
    friend bool operator==(Omega, Omega) { return true; }
  };

  static TreeEnd omega() { return TreeEnd(Omega{}); }
  static TreeEnd word(std::vector<LabelEntry> labels) {
    for (const auto& e : labels) {
      if (e.second < 0) throw InvalidVertex("negative label in end");
    }
    return TreeEnd(detail::canonical_word(std::move(labels)));
  }

  bool is_omega() const { return std::holds_alternative<Omega>(data_); }
  /// Throws UndefinedConfluent for omega.
  const LabelWord& labels() const {
    if (is_omega()) throw UndefinedConfluent("omega has no label word");
    return std::get<LabelWord>(data_);
  }
  int label_at(Level j) const { return detail::word_at(labels(), j); }

  friend bool operator==(const TreeEnd&, const TreeEnd&) = default;

 private:
  explicit TreeEnd(std::variant<Omega, LabelWord> d) : data_(std::move(d)) {}
  std::variant<Omega, LabelWord> data_;
};

inline TreeVertex truncate_to(const TreeVertex& v, Level level) {
  return TreeVertex(TreeVertex::Trusted{}, level, detail::word_up_to(v.labels_, level));
}

/// x^-: the unique neighbour one horocycle closer to omega.
inline TreeVertex predecessor(const TreeVertex& v) { return truncate_to(v, v.level_ - 1); }

inline TreeVertex successor(const TreeVertex& v, int label, const TreeParams& p) {
  if (label < 0 || label >= p.q) {
    throw InvalidLabel("label " + std::to_string(label) + " outside Z_" + std::to_string(p.q));
  }
  LabelWord w = v.labels_;
  if (label != 0) w.emplace_back(v.level_ + 1, label);
  return TreeVertex(TreeVertex::Trusted{}, v.level_ + 1, std::move(w));
}

/// Level translation j -> j + m; an automorphism fixing omega.
inline TreeVertex shift(const TreeVertex& v, Level m) {
  LabelWord w = v.labels_;
  for (auto& e : w) e.first += m;
  return TreeVertex(TreeVertex::Trusted{}, v.level_ + m, std::move(w));
}

/// Checks the label values against the branching number.
inline void validate(const TreeVertex& v, const TreeParams& p) {
  for (const auto& [j, val] : v.labels()) {
    if (val >= p.q) throw InvalidLabel("label value " + std::to_string(val) + " >= q");
  }
}

inline void validate(const TreeEnd& e, const TreeParams& p) {
  if (e.is_omega()) return;
  for (const auto& [j, val] : e.labels()) {
    if (val >= p.q) throw InvalidLabel("end label value " + std::to_string(val) + " >= q");
  }
}

inline std::vector<TreeVertex> neighbours(const TreeVertex& v, const TreeParams& p) {
  std::vector<TreeVertex> out;
  out.reserve(static_cast<std::size_t>(p.q) + 1);
  out.push_back(predecessor(v));
  for (int l = 0; l < p.q; ++l) out.push_back(successor(v, l, p));
  return out;
}

inline bool adjacent(const TreeVertex& a, const TreeVertex& b) {
  if (a.level() == b.level() + 1) return predecessor(a) == b;
  if (b.level() == a.level() + 1) return predecessor(b) == a;
  return false;
}

/// Confluent with respect to omega: the highest vertex on both rays to omega.
inline TreeVertex confluent_omega(const TreeVertex& a, const TreeVertex& b) {
  const Level m = std::min(a.level(), b.level());
  const auto j = detail::first_mismatch(a.labels(), b.labels(), m);
  return truncate_to(a, j ? *j - 1 : m);
}

/// v ⋏ xi for xi in the boundary minus omega.
inline TreeVertex confluent_omega_end(const TreeVertex& v, const TreeEnd& xi) {
  if (xi.is_omega()) throw UndefinedConfluent("confluent with omega is undefined");
  const auto j = detail::first_mismatch(v.labels(), xi.labels(), v.level());
  return truncate_to(v, j ? *j - 1 : v.level());
}

inline std::int64_t distance(const TreeVertex& a, const TreeVertex& b) {
  const Level c = confluent_omega(a, b).level();
  return (a.level() - c) + (b.level() - c);
}

/// Vertex path a = x_0, ..., x_d = b: down to a ⋏ b, then up following b.
inline std::vector<TreeVertex> geodesic(const TreeVertex& a, const TreeVertex& b) {
  const TreeVertex c = confluent_omega(a, b);
  std::vector<TreeVertex> path;
  path.reserve(static_cast<std::size_t>(distance(a, b)) + 1);
  for (TreeVertex x = a; x.level() > c.level(); x = predecessor(x)) path.push_back(x);
  path.push_back(c);
  for (Level j = c.level() + 1; j <= b.level(); ++j) path.push_back(truncate_to(b, j));
  return path;
}

/// Confluent x ∧ xi with respect to the root o. For omega this is x ⋏ o.
///
/// Among the three omega-confluents o⋏x, o⋏xi, x⋏xi two coincide and the third
/// is at least as high; the root-confluent is the highest of the three.
inline TreeVertex confluent_root(const TreeVertex& x, const TreeEnd& xi) {
  const TreeVertex o = TreeVertex::root();
  const TreeVertex ox = confluent_omega(o, x);
  if (xi.is_omega()) return ox;
  const TreeVertex oxi = confluent_omega_end(o, xi);
  const TreeVertex xxi = confluent_omega_end(x, xi);
  const TreeVertex* best = &ox;
  if (oxi.level() > best->level()) best = &oxi;
  if (xxi.level() > best->level()) best = &xxi;
  return *best;
}

/// hor(x, xi) = d(x, c) - d(o, c) with c = x ∧ xi; equals level(x) for omega.
inline std::int64_t busemann_wrt_end(const TreeVertex& x, const TreeEnd& xi) {
  const TreeVertex c = confluent_root(x, xi);
  return distance(x, c) - distance(TreeVertex::root(), c);
}

/// The vertex of the geodesic omega -> xi on horocycle `level`.
inline TreeVertex end_vertex_at(const TreeEnd& xi, Level level) {
  return TreeVertex(level, detail::word_up_to(xi.labels(), level));
}

/// All vertices at distance <= radius from center, in breadth-first order.
inline std::vector<TreeVertex> ball(const TreeVertex& center, int radius, const TreeParams& p) {
  std::vector<TreeVertex> out{center};
  std::vector<std::size_t> depth{0};
  // A vertex is reached from exactly one neighbour in a tree; remember it.
  std::vector<std::optional<TreeVertex>> from{std::nullopt};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (depth[i] == static_cast<std::size_t>(radius)) continue;
    for (auto& w : neighbours(out[i], p)) {
      if (from[i] && w == *from[i]) continue;
      out.push_back(std::move(w));
      depth.push_back(depth[i] + 1);
      from.emplace_back(out[i]);
    }
  }
  return out;
}

}  // namespace dlh

template <>
struct std::hash<dlh::TreeVertex> {
  std::size_t operator()(const dlh::TreeVertex& v) const noexcept {
    std::size_t seed = std::hash<dlh::Level>{}(v.level());
    for (const auto& [j, val] : v.labels()) {
      dlh::detail::hash_combine(seed, std::hash<dlh::Level>{}(j));
      dlh::detail::hash_combine(seed, static_cast<std::size_t>(val));
    }
    return seed;
  }
};
