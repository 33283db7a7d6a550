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

// Exact transition operators: P_alpha on DL(q,r), its projections P1 on T_q and
// P2 on T_r, Q_alpha on DL^s(q,r), h-transforms, and the projection of Q_alpha
// through the sibling factor map.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlh/dl_graph.hpp"
#include "dlh/rational.hpp"
#include "dlh/tree.hpp"

namespace dlh {

enum class WalkKind { PAlpha, P1, P2, QAlpha, Conjugated, Projected };

inline std::string to_string(WalkKind k) {
  switch (k) {
    case WalkKind::PAlpha: return "p-alpha";
    case WalkKind::P1: return "p1";
    case WalkKind::P2: return "p2";
    case WalkKind::QAlpha: return "q-alpha";
    case WalkKind::Conjugated: return "conjugated";
    case WalkKind::Projected: return "projected";
  }
  return "?";
}

template <class Vertex>
struct Transition {
  Vertex target;
  Rational weight;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// A nearest-neighbour transition kernel with exact rational weights.
///
/// Base kinds have vertex-independent weight lists; `targets` and
/// `constant_weights` expose that so the simulator can skip rational
/// arithmetic per step.
template <class Vertex>
class WalkOperator {
 public:
  using Row = std::vector<Transition<Vertex>>;
  using TargetsFn = std::function<std::vector<Vertex>(const Vertex&)>;
  using RowFn = std::function<Row(const Vertex&)>;

  WalkKind kind() const { return kind_; }
  const Rational& alpha() const { return alpha_; }
  const DLParams& params() const { return params_; }
  /// Branching of the tree a P1/P2 operator lives on.
  int branching() const { return kind_ == WalkKind::P2 ? params_.r : params_.q; }
  /// False for h-transforms, whose rows sum to 1 only where g is harmonic.
  bool stochastic_certified() const { return kind_ != WalkKind::Conjugated; }
  const std::optional<std::vector<Rational>>& constant_weights() const { return weights_; }
  const WalkOperator* base() const { return base_.get(); }

  Row transitions(const Vertex& v) const {
    if (row_) return row_(v);
    auto ts = targets_(v);
    Row out;
    out.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) out.push_back({std::move(ts[i]), (*weights_)[i]});
    return out;
  }

  /// Transition targets in the same order as constant_weights(); only for
  /// operators with constant weights.
  std::vector<Vertex> targets(const Vertex& v) const {
    if (!targets_) throw Unsupported("operator has vertex-dependent weights");
    return targets_(v);
  }

  static WalkOperator constant(WalkKind kind, Rational alpha, DLParams params, TargetsFn targets,
                               std::vector<Rational> weights) {
    WalkOperator op(kind, std::move(alpha), params);
    op.targets_ = std::move(targets);
    op.weights_ = std::move(weights);
    return op;
  }

  static WalkOperator general(WalkKind kind, Rational alpha, DLParams params, RowFn row,
                              std::shared_ptr<const WalkOperator> base) {
    WalkOperator op(kind, std::move(alpha), params);
    op.row_ = std::move(row);
    op.base_ = std::move(base);
    return op;
  }

 private:
  WalkOperator(WalkKind kind, Rational alpha, DLParams params)
      : kind_(kind), alpha_(std::move(alpha)), params_(params) {}

  WalkKind kind_;
  Rational alpha_;
  DLParams params_;
  TargetsFn targets_;
  std::optional<std::vector<Rational>> weights_;
  RowFn row_;
  std::shared_ptr<const WalkOperator> base_;
};

using TreeWalk = WalkOperator<TreeVertex>;
using DLWalk = WalkOperator<DLVertex>;
using DLFunction = std::function<Rational(const DLVertex&)>;
using TreeFunction = std::function<Rational(const TreeVertex&)>;

/// P_alpha: alpha/q to each (successor of x1, x2^-), (1-alpha)/r to each
/// (x1^-, successor of x2).
inline DLWalk p_alpha(const DLParams& p, const Rational& alpha) {
  require_alpha(alpha);
  std::vector<Rational> w;
  for (int l = 0; l < p.q; ++l) w.push_back(alpha / p.q);
  for (int m = 0; m < p.r; ++m) w.push_back((1 - alpha) / p.r);
  for (auto& x : w) x.canonicalize();
  return DLWalk::constant(WalkKind::PAlpha, alpha, p, [p](const DLVertex& v) { return dl_neighbours(v, p); },
                          std::move(w));
}

/// Q_alpha on DL^s(q,r): alpha/q^2 upward, (1-alpha)/(qr) downward.
inline DLWalk q_alpha(const DLParams& p, const Rational& alpha) {
  require_alpha(alpha);
  std::vector<Rational> w;
  for (int i = 0; i < p.q * p.q; ++i) w.push_back(alpha / (p.q * p.q));
  for (int i = 0; i < p.q * p.r; ++i) w.push_back((1 - alpha) / (p.q * p.r));
  for (auto& x : w) x.canonicalize();
  return DLWalk::constant(WalkKind::QAlpha, alpha, p, [p](const DLVertex& v) { return dls_neighbours(v, p); },
                          std::move(w));
}

namespace detail {

inline TreeWalk tree_walk(WalkKind kind, const DLParams& p, const Rational& alpha, int branching,
                          const Rational& to_predecessor, const Rational& to_each_successor) {
  std::vector<Rational> w{to_predecessor};
  for (int l = 0; l < branching; ++l) w.push_back(to_each_successor);
  for (auto& x : w) x.canonicalize();
  TreeParams tp(branching);
  return TreeWalk::constant(kind, alpha, p, [tp](const TreeVertex& v) { return neighbours(v, tp); },
                            std::move(w));
}

}  // namespace detail

/// P1 on T_q: alpha/q to each successor, 1-alpha to the predecessor.
inline TreeWalk p1(const DLParams& p, const Rational& alpha) {
  require_alpha(alpha);
  return detail::tree_walk(WalkKind::P1, p, alpha, p.q, 1 - alpha, alpha / p.q);
}

/// P2 on T_r: alpha to the predecessor, (1-alpha)/r to each successor.
inline TreeWalk p2(const DLParams& p, const Rational& alpha) {
  require_alpha(alpha);
  return detail::tree_walk(WalkKind::P2, p, alpha, p.r, alpha, (1 - alpha) / p.r);
}

/// Ph(v) = sum_y p(v,y) h(y).
template <class Vertex, class Fn>
Rational apply(const WalkOperator<Vertex>& op, const Fn& h, const Vertex& v) {
  Rational sum(0);
  for (const auto& t : op.transitions(v)) sum += t.weight * h(t.target);
  return sum;
}

template <class Vertex, class Fn>
bool is_harmonic_at(const WalkOperator<Vertex>& op, const Fn& h, const Vertex& v) {
  return apply(op, h, v) == h(v);
}

template <class Vertex>
Rational row_sum(const WalkOperator<Vertex>& op, const Vertex& v) {
  Rational s(0);
  for (const auto& t : op.transitions(v)) s += t.weight;
  return s;
}

/// h-transform: p(x,y) g(y) / g(x). Rows sum to 1 exactly where g is
/// op-harmonic. Throws InvalidParameter on a nonpositive value of g.
template <class Vertex>
WalkOperator<Vertex> conjugate(const WalkOperator<Vertex>& op,
                               std::function<Rational(const Vertex&)> g) {
  auto base = std::make_shared<const WalkOperator<Vertex>>(op);
  auto row = [base, g = std::move(g)](const Vertex& v) {
    const Rational gv = g(v);
    if (gv <= 0) throw InvalidParameter("conjugating function must be positive");
    auto out = base->transitions(v);
    for (auto& t : out) {
      const Rational gy = g(t.target);
      if (gy <= 0) throw InvalidParameter("conjugating function must be positive");
      t.weight = t.weight * gy / gv;
    }
    return out;
  };
  return WalkOperator<Vertex>::general(WalkKind::Conjugated, op.alpha(), op.params(), std::move(row), base);
}

/// Transitions of the projection of Q_alpha computed from the representative
/// of w whose first coordinate carries top label `label`: targets pass through
/// the factor map and weights of a class are summed.
inline std::vector<Transition<DLVertex>> projected_row(const DLWalk& q_op, const DLVertex& w, int label) {
  if (q_op.kind() != WalkKind::QAlpha) throw Unsupported("projection requires a Q_alpha operator");
  std::map<DLVertex, Rational> merged;
  for (const auto& t : q_op.transitions(factor_lift(w, label, q_op.params()))) {
    merged[factor_map(t.target)] += t.weight;
  }
  std::vector<Transition<DLVertex>> out;
  for (auto& [v, wt] : merged) out.push_back({v, wt});
  return out;
}

/// The image of Q_alpha under the factor map DL^s(q,r) -> DL(q,r).
inline DLWalk project(const DLWalk& q_op) {
  if (q_op.kind() != WalkKind::QAlpha) throw Unsupported("projection requires a Q_alpha operator");
  auto base = std::make_shared<const DLWalk>(q_op);
  auto row = [base](const DLVertex& w) { return projected_row(*base, w, 0); };
  return DLWalk::general(WalkKind::Projected, q_op.alpha(), q_op.params(), std::move(row), base);
}

/// Rows compared as multisets of (target, weight).
template <class Vertex>
bool same_row(std::vector<Transition<Vertex>> a, std::vector<Transition<Vertex>> b) {
  auto less = [](const Transition<Vertex>& x, const Transition<Vertex>& y) {
    if (x.target != y.target) return x.target < y.target;
    return x.weight < y.weight;
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

}  // namespace dlh
