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

// The lamplighter group Z_q wr Z, its generator models, the identification with
// DL(q,q), and the defect functionals.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dlh/dl_graph.hpp"
#include "dlh/tree.hpp"

namespace dlh {

/// (eta, k): a finitely supported lamp configuration and the lamplighter
/// position. Values are reduced mod q; zeros are not stored.
class GroupElement {
 public:
  explicit GroupElement(int q = 2, std::vector<LabelEntry> eta = {}, std::int64_t k = 0) : q_(q), k_(k) {
    if (q < 2) throw InvalidParameter("lamp group order must be at least 2");
    for (auto& e : eta) e.second = ((e.second % q) + q) % q;
    eta_ = detail::canonical_word(std::move(eta));
  }

  static GroupElement identity(int q) { return GroupElement(q); }
  /// (delta_n^l, k): value l at n, zero elsewhere.
  static GroupElement delta(int q, std::int64_t n, int l, std::int64_t k = 0) {
    return GroupElement(q, {{n, l}}, k);
  }

  int q() const { return q_; }
  std::int64_t k() const { return k_; }
  const LabelWord& eta() const { return eta_; }
  int lamp(std::int64_t n) const { return detail::word_at(eta_, n); }

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  int q_;
  std::int64_t k_;
  LabelWord eta_;
};

inline void require_same_q(const GroupElement& a, const GroupElement& b) {
  if (a.q() != b.q()) throw InvalidParameter("group elements over different lamp groups");
}

/// (a.eta + b.eta translated by a.k, a.k + b.k).
inline GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  require_same_q(a, b);
  std::vector<LabelEntry> sum(a.eta().begin(), a.eta().end());
  for (const auto& [n, v] : b.eta()) sum.emplace_back(n + a.k(), (a.lamp(n + a.k()) + v) % a.q());
  return GroupElement(a.q(), std::move(sum), a.k() + b.k());
}

inline GroupElement inverse(const GroupElement& a) {
  std::vector<LabelEntry> neg;
  for (const auto& [n, v] : a.eta()) neg.emplace_back(n - a.k(), a.q() - v);
  return GroupElement(a.q(), std::move(neg), -a.k());
}

/// x1 = (eta restricted to (-inf, k], level k); x2 at level -k whose label at
/// absolute index j is eta(1 - j), i.e. eta restricted to [k+1, inf) read
/// backwards.
inline DLVertex encode(const GroupElement& a) {
  std::vector<LabelEntry> first, second;
  for (const auto& [n, v] : a.eta()) {
    if (n <= a.k()) {
      first.emplace_back(n, v);
    } else {
      second.emplace_back(1 - n, v);
    }
  }
  return {TreeVertex(a.k(), std::move(first)), TreeVertex(-a.k(), std::move(second))};
}

inline GroupElement decode(const DLVertex& v, const DLParams& p) {
  if (p.q != p.r) throw Unsupported("decode requires DL(q,q)");
  if (p.level_sum != 0) throw Unsupported("decode requires level sum 0");
  validate(v, p);
  std::vector<LabelEntry> eta(v.x1.labels().begin(), v.x1.labels().end());
  for (const auto& [j, val] : v.x2.labels()) eta.emplace_back(1 - j, val);
  return GroupElement(p.q, std::move(eta), v.x1.level());
}

enum class GeneratorModel { WalkSwitch, WalkOrSwitch, SwitchWalkSwitch };

inline std::vector<GroupElement> generators(GeneratorModel m, int q) {
  std::vector<GroupElement> out;
  switch (m) {
    case GeneratorModel::WalkSwitch:
      for (int l = 0; l < q; ++l) out.push_back(GroupElement::delta(q, 1, l, 1));
      for (int l = 0; l < q; ++l) out.push_back(GroupElement::delta(q, 0, l, -1));
      break;
    case GeneratorModel::WalkOrSwitch:
      out.push_back(GroupElement(q, {}, 1));
      out.push_back(GroupElement(q, {}, -1));
      for (int l = 1; l < q; ++l) out.push_back(GroupElement::delta(q, 0, l, 0));
      break;
    case GeneratorModel::SwitchWalkSwitch:
      for (int step : {1, -1}) {
        for (int l = 0; l < q; ++l) {
          for (int m2 = 0; m2 < q; ++m2) out.push_back(GroupElement(q, {{0, l}, {step, m2}}, step));
        }
      }
      break;
  }
  return out;
}

/// Right Cayley graph neighbours {a s : s in generators(m)}.
inline std::vector<GroupElement> cayley_neighbours(const GroupElement& a, GeneratorModel m) {
  std::vector<GroupElement> out;
  for (const auto& s : generators(m, a.q())) out.push_back(multiply(a, s));
  return out;
}

/// (eta_{not k}, k): the lamp at k is forgotten and the lamps below shift up.
inline GroupElement factor_config(const GroupElement& a) {
  std::vector<LabelEntry> eta;
  for (const auto& [n, v] : a.eta()) {
    if (n < a.k()) {
      eta.emplace_back(n + 1, v);
    } else if (n > a.k()) {
      eta.emplace_back(n, v);
    }
  }
  return GroupElement(a.q(), std::move(eta), a.k());
}

enum class BoundarySide { Plus, Minus };

/// Zero-tail infinite configuration representing an end of the first tree
/// (Plus) or of the second tree (Minus).
class BoundaryConfig {
 public:
  BoundaryConfig(BoundarySide side, int q, std::vector<LabelEntry> labels = {}) : side_(side), q_(q) {
    if (q < 2) throw InvalidParameter("lamp group order must be at least 2");
    for (const auto& e : labels) {
      if (e.second < 0 || e.second >= q) throw InvalidLabel("boundary configuration value outside Z_q");
    }
    labels_ = detail::canonical_word(std::move(labels));
  }

  BoundarySide side() const { return side_; }
  int q() const { return q_; }
  const LabelWord& labels() const { return labels_; }
  int at(std::int64_t n) const { return detail::word_at(labels_, n); }

  friend bool operator==(const BoundaryConfig&, const BoundaryConfig&) = default;

 private:
  BoundarySide side_;
  int q_;
  LabelWord labels_;
};

/// xi'(n) = xi(n - m).
inline BoundaryConfig shifted(const BoundaryConfig& xi, std::int64_t m) {
  std::vector<LabelEntry> w(xi.labels().begin(), xi.labels().end());
  for (auto& e : w) e.first += m;
  return BoundaryConfig(xi.side(), xi.q(), std::move(w));
}

/// The tree end that xi describes: Plus configs label the first tree directly,
/// Minus configs label the second tree with xi(n) on the edge into level 1 - n.
inline TreeEnd to_tree_end(const BoundaryConfig& xi) {
  if (xi.side() == BoundarySide::Plus) {
    return TreeEnd::word(std::vector<LabelEntry>(xi.labels().begin(), xi.labels().end()));
  }
  std::vector<LabelEntry> w;
  for (const auto& [n, v] : xi.labels()) w.emplace_back(1 - n, v);
  return TreeEnd::word(std::move(w));
}

namespace detail {

inline void require_side(const BoundaryConfig& xi, BoundarySide side) {
  if (xi.side() != side) throw SideMismatch("boundary configuration on the wrong side");
}

inline void require_q(const GroupElement& a, const BoundaryConfig& xi) {
  if (a.q() != xi.q()) throw InvalidParameter("configuration and element over different lamp groups");
}

// min{n <= k : xi(n + offset) != eta(n + offset)}, or k.
inline std::int64_t min_mismatch_below(const LabelWord& eta, const LabelWord& xi, std::int64_t k, int offset) {
  const auto j = first_mismatch(eta, xi, k + offset);
  return j ? *j - offset : k;
}

// max{n > k : xi(n) != eta(n)}, or k.
inline std::int64_t max_mismatch_above(const LabelWord& eta, const LabelWord& xi, std::int64_t k) {
  std::vector<std::int64_t> idx;
  for (const auto& e : eta) idx.push_back(e.first);
  for (const auto& e : xi) idx.push_back(e.first);
  std::int64_t best = k;
  for (std::int64_t n : idx) {
    if (n > k && n > best && word_at(eta, n) != word_at(xi, n)) best = n;
  }
  return best;
}

}  // namespace detail

/// df+((eta,k), xi) = hor(x1 ⋏ xi) - hor(o1 ⋏ xi).
inline std::int64_t defect_plus(const GroupElement& a, const BoundaryConfig& xi) {
  detail::require_side(xi, BoundarySide::Plus);
  detail::require_q(a, xi);
  const std::int64_t at_x = detail::min_mismatch_below(a.eta(), xi.labels(), a.k(), 1);
  const std::int64_t at_o = detail::min_mismatch_below({}, xi.labels(), 0, 1);
  return at_x - at_o;
}

/// df-((eta,k), xi) = hor(x2 ⋏ xi) - hor(o2 ⋏ xi).
inline std::int64_t defect_minus(const GroupElement& a, const BoundaryConfig& xi) {
  detail::require_side(xi, BoundarySide::Minus);
  detail::require_q(a, xi);
  const std::int64_t neg_at_x = detail::max_mismatch_above(a.eta(), xi.labels(), a.k());
  const std::int64_t neg_at_o = detail::max_mismatch_above({}, xi.labels(), 0);
  return neg_at_o - neg_at_x;
}

/// Sibling-class defect for the switch-walk-switch walk: the lamp at k no
/// longer shifts the comparison window.
inline std::int64_t defect_oplus(const GroupElement& a, const BoundaryConfig& xi) {
  detail::require_side(xi, BoundarySide::Plus);
  detail::require_q(a, xi);
  const std::int64_t at_x = detail::min_mismatch_below(a.eta(), xi.labels(), a.k(), 0);
  const std::int64_t at_o = detail::min_mismatch_below({}, xi.labels(), 0, 0);
  return at_x - at_o;
}

}  // namespace dlh
