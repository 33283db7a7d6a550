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

// Diestel-Leader graphs DL(q,r) as horocyclic products of T_q and T_r, and the
// sibling-augmented graph DL^s(q,r) in which every first-tree vertex is also
// joined to the successors of its siblings.

#include <compare>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "dlh/tree.hpp"

namespace dlh {

struct DLParams {
  int q = 2;
  int r = 2;
  /// Admissible value of level(x1) + level(x2).
  Level level_sum = 0;

  DLParams(int first, int second, Level sum = 0) : q(first), r(second), level_sum(sum) {
    if (q < 2 || r < 2) throw InvalidParameter("DL branching numbers must be at least 2");
  }
  TreeParams first() const { return TreeParams(q); }
  TreeParams second() const { return TreeParams(r); }
};

struct DLVertex {
  TreeVertex x1;
  TreeVertex x2;

  static DLVertex root() { return {}; }

  friend auto operator<=>(const DLVertex&, const DLVertex&) = default;
  friend bool operator==(const DLVertex&, const DLVertex&) = default;
};

/// Throws InvalidVertex on a level-sum violation or out-of-range labels.
inline void validate(const DLVertex& v, const DLParams& p) {
  if (v.x1.level() + v.x2.level() != p.level_sum) {
    throw InvalidVertex("level sum " + std::to_string(v.x1.level() + v.x2.level()) +
                        " differs from " + std::to_string(p.level_sum));
  }
  validate(v.x1, p.first());
  validate(v.x2, p.second());
}

inline bool same_sibling(const TreeVertex& a, const TreeVertex& b) {
  return a.level() == b.level() && predecessor(a) == predecessor(b);
}

/// The q members of the sibling class of v (v itself included), by top label.
inline std::vector<TreeVertex> siblings(const TreeVertex& v, const TreeParams& p) {
  const TreeVertex parent = predecessor(v);
  std::vector<TreeVertex> out;
  out.reserve(static_cast<std::size_t>(p.q));
  for (int l = 0; l < p.q; ++l) out.push_back(successor(parent, l, p));
  return out;
}

/// q upward neighbours (successor of x1, predecessor of x2) followed by r
/// downward ones (predecessor of x1, successor of x2).
inline std::vector<DLVertex> dl_neighbours(const DLVertex& v, const DLParams& p) {
  validate(v, p);
  const TreeParams t1 = p.first(), t2 = p.second();
  std::vector<DLVertex> out;
  out.reserve(static_cast<std::size_t>(p.q + p.r));
  const TreeVertex x2_down = predecessor(v.x2);
  for (int l = 0; l < p.q; ++l) out.push_back({successor(v.x1, l, t1), x2_down});
  const TreeVertex x1_down = predecessor(v.x1);
  for (int m = 0; m < p.r; ++m) out.push_back({x1_down, successor(v.x2, m, t2)});
  return out;
}

/// q^2 upward neighbours {(y1, x2^-) : y1^- ~ x1} followed by q*r downward
/// ones {(u1, y2) : u1 ~ x1^-, y2^- = x2}; each vertex listed once.
inline std::vector<DLVertex> dls_neighbours(const DLVertex& v, const DLParams& p) {
  validate(v, p);
  const TreeParams t1 = p.first(), t2 = p.second();
  std::vector<DLVertex> out;
  out.reserve(static_cast<std::size_t>(p.q * p.q + p.q * p.r));
  const TreeVertex x2_down = predecessor(v.x2);
  for (const auto& u1 : siblings(v.x1, t1)) {
    for (int l = 0; l < p.q; ++l) out.push_back({successor(u1, l, t1), x2_down});
  }
  const auto uncles = siblings(predecessor(v.x1), t1);
  for (const auto& u1 : uncles) {
    for (int m = 0; m < p.r; ++m) out.push_back({u1, successor(v.x2, m, t2)});
  }
  return out;
}

/// Sibling class in DL^s, represented by the member whose first coordinate has
/// top label 0.
struct SiblingClass {
  DLVertex canonical;

  friend auto operator<=>(const SiblingClass&, const SiblingClass&) = default;
  friend bool operator==(const SiblingClass&, const SiblingClass&) = default;
};

inline SiblingClass sibling_class(const DLVertex& v) {
  return {{TreeVertex(v.x1.level(), predecessor(v.x1).labels()), v.x2}};
}

inline std::vector<DLVertex> members(const SiblingClass& c, const DLParams& p) {
  std::vector<DLVertex> out;
  for (const auto& u : siblings(c.canonical.x1, p.first())) out.push_back({u, c.canonical.x2});
  return out;
}

/// Projection DL^s(q,r) -> DL(q,r): x1 is replaced by its predecessor and the
/// first coordinate shifted back up one level so that the level sum stays 0.
inline DLVertex factor_map(const DLVertex& v) {
  return {shift(predecessor(v.x1), 1), v.x2};
}

/// A preimage of w under factor_map with first-coordinate top label `label`.
inline DLVertex factor_lift(const DLVertex& w, int label, const DLParams& p) {
  return {successor(shift(w.x1, -1), label, p.first()), w.x2};
}

/// Vertices of the graph-distance ball around center, breadth-first.
template <class NeighbourFn>
std::vector<DLVertex> dl_ball(const DLVertex& center, int radius, NeighbourFn&& nbrs);

}  // namespace dlh

template <>
struct std::hash<dlh::DLVertex> {
  std::size_t operator()(const dlh::DLVertex& v) const noexcept {
    std::size_t seed = std::hash<dlh::TreeVertex>{}(v.x1);
    dlh::detail::hash_combine(seed, std::hash<dlh::TreeVertex>{}(v.x2));
    return seed;
  }
};

namespace dlh {

template <class NeighbourFn>
std::vector<DLVertex> dl_ball(const DLVertex& center, int radius, NeighbourFn&& nbrs) {
  std::vector<DLVertex> out{center};
  std::unordered_set<DLVertex> seen{center};
  std::size_t layer_begin = 0;
  for (int d = 0; d < radius; ++d) {
    const std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (auto& w : nbrs(out[i])) {
        if (seen.insert(w).second) out.push_back(std::move(w));
      }
    }
    layer_begin = layer_end;
  }
  return out;
}

/// Radius ball of DL(q,r) (variant dl) or DL^s(q,r) (variant dls) around o1o2.
inline std::vector<DLVertex> dl_ball(int radius, const DLParams& p, bool sibling_variant = false) {
  if (sibling_variant) {
    return dl_ball(DLVertex::root(), radius, [&](const DLVertex& v) { return dls_neighbours(v, p); });
  }
  return dl_ball(DLVertex::root(), radius, [&](const DLVertex& v) { return dl_neighbours(v, p); });
}

}  // namespace dlh
