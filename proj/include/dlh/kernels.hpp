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

// Closed-form hitting probabilities of the tree projections, Martin kernels on
// T_q and T_r, their lifts to DL(q,r), nonnegative combinations, and the defect
// kernels on the lamplighter group.
//
// The second tree is handled by the substitution (q, alpha) -> (r, 1 - alpha).
// Kernel values are kept as integer powers of F^- and rho^2; the exponent of
// rho is always even.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlh/lamplighter.hpp"
#include "dlh/rational.hpp"
#include "dlh/walks.hpp"

namespace dlh {

/// F^-(alpha): probability that P1 ever reaches the predecessor.
inline Rational f_minus(const Rational& alpha) {
  require_alpha(alpha);
  if (alpha >= Rational(1, 2)) return Rational((1 - alpha) / alpha);
  return Rational(1);
}

/// F^+(alpha, q): probability that P1 ever reaches a given successor.
inline Rational f_plus(const Rational& alpha, int q) {
  require_alpha(alpha);
  if (q < 2) throw InvalidParameter("branching must be at least 2");
  if (alpha >= Rational(1, 2)) return Rational(1, q);
  return Rational(alpha / ((1 - alpha) * q));
}

/// rho^2 = F^- F^+ = min{(1-alpha)/(alpha q), alpha/((1-alpha) q)}.
inline Rational rho_squared(const Rational& alpha, int q) {
  return Rational(f_minus(alpha) * f_plus(alpha, q));
}

enum class Side { First, Second };

inline std::string to_string(Side s) { return s == Side::First ? "first" : "second"; }

/// The (alpha, branching) pair of the P1-type walk seen on the given side.
inline std::pair<Rational, int> side_walk(Side side, const Rational& alpha, const DLParams& p) {
  require_alpha(alpha);
  if (side == Side::First) return {alpha, p.q};
  return {Rational(1 - alpha), p.r};
}

inline const TreeVertex& side_vertex(Side side, const DLVertex& v) {
  return side == Side::First ? v.x1 : v.x2;
}

inline TreeParams side_params(Side side, const DLParams& p) {
  return side == Side::First ? p.first() : p.second();
}

/// Exact F(x, y) for the tree walk of the given side: (F^-)^{up} (F^+)^{down}
/// along the geodesic through x ⋏ y.
inline Rational tree_hitting_probability(Side side, const TreeVertex& x, const TreeVertex& y, const Rational& alpha,
                                         const DLParams& p) {
  const auto [a, b] = side_walk(side, alpha, p);
  const Level c = confluent_omega(x, y).level();
  return Rational(pow(f_minus(a), x.level() - c) * pow(f_plus(a, b), y.level() - c));
}

/// K(x, xi) on the tree of the given side.
inline Rational martin_kernel_tree(Side side, const TreeVertex& x, const TreeEnd& xi, const Rational& alpha,
                                   const DLParams& p) {
  const auto [a, b] = side_walk(side, alpha, p);
  validate(x, side_params(side, p));
  validate(xi, side_params(side, p));
  const Rational at_omega = pow(f_minus(a), x.level());
  if (xi.is_omega()) return at_omega;
  const std::int64_t excess = busemann_wrt_end(x, xi) - x.level();
  if (excess % 2 != 0) throw InvariantViolation("odd Busemann excess");
  return Rational(at_omega * pow(rho_squared(a, b), excess / 2));
}

/// h(x1 x2) = h_i(x_i).
inline DLFunction lift(Side side, TreeFunction h) {
  return [side, h = std::move(h)](const DLVertex& v) { return h(side_vertex(side, v)); };
}

struct KernelSpec {
  Side side = Side::First;
  TreeEnd end = TreeEnd::omega();
  Rational alpha{1, 2};
  DLParams params{2, 2};
};

/// Kernels at omega are minimal only in the driftless case, where they are 1.
inline bool is_minimal(const KernelSpec& s) { return !s.end.is_omega() || s.alpha == Rational(1, 2); }

struct HarmonicTerm {
  Rational coefficient;
  KernelSpec spec;
};

/// constant + sum of coefficient * K_side(x_side, end).
struct HarmonicFunction {
  Rational alpha{1, 2};
  DLParams params{2, 2};
  Rational constant{0};
  std::vector<HarmonicTerm> terms;
  /// Set for single minimal kernels (and the constant 1 at alpha = 1/2).
  bool minimal = false;
};

inline HarmonicFunction minimal_kernel(const KernelSpec& spec) {
  require_alpha(spec.alpha);
  validate(spec.end, side_params(spec.side, spec.params));
  HarmonicFunction h{spec.alpha, spec.params, Rational(0), {{Rational(1), spec}}, is_minimal(spec)};
  return h;
}

/// The constant function c.
inline HarmonicFunction constant_function(const Rational& alpha, const DLParams& p, const Rational& c) {
  require_alpha(alpha);
  if (c < 0) throw InvalidParameter("negative constant");
  return HarmonicFunction{alpha, p, c, {}, c == 1 && alpha == Rational(1, 2)};
}

/// Nonnegative combination; all specs must share alpha and params.
inline HarmonicFunction combine(const Rational& alpha, const DLParams& p, const std::vector<HarmonicTerm>& terms,
                                const Rational& constant = Rational(0)) {
  HarmonicFunction h = constant_function(alpha, p, constant);
  h.minimal = false;
  for (const auto& t : terms) {
    if (t.coefficient < 0) throw InvalidParameter("negative coefficient in combination");
    if (t.spec.alpha != alpha || t.spec.params.q != p.q || t.spec.params.r != p.r) {
      throw InvalidParameter("combined kernels must share alpha and (q, r)");
    }
    validate(t.spec.end, side_params(t.spec.side, p));
    h.terms.push_back(t);
  }
  return h;
}

inline Rational evaluate(const HarmonicFunction& h, const DLVertex& v) {
  Rational sum = h.constant;
  for (const auto& t : h.terms) {
    if (t.coefficient == 0) continue;
    sum += t.coefficient * martin_kernel_tree(t.spec.side, side_vertex(t.spec.side, v), t.spec.end, h.alpha, h.params);
  }
  return sum;
}

inline DLFunction evaluator(HarmonicFunction h) {
  return [h = std::move(h)](const DLVertex& v) { return evaluate(h, v); };
}

/// K_side(x_side, omega) lifted to DL(q,r); the h-transform by it reverses the
/// drift on that side.
inline DLFunction omega_kernel(Side side, const Rational& alpha, const DLParams& p) {
  return evaluator(minimal_kernel({side, TreeEnd::omega(), alpha, p}));
}

/// Defect kernel of simple random walk on the lamplighter group:
/// q^{df+} or q^{df-} (WalkSwitch), q^{df⊕} or q^{df-} (SwitchWalkSwitch).
inline Rational defect_kernel(GeneratorModel model, const GroupElement& a, const BoundaryConfig& xi) {
  std::int64_t d = 0;
  if (model == GeneratorModel::WalkSwitch) {
    d = xi.side() == BoundarySide::Plus ? defect_plus(a, xi) : defect_minus(a, xi);
  } else if (model == GeneratorModel::SwitchWalkSwitch) {
    d = xi.side() == BoundarySide::Plus ? defect_oplus(a, xi) : defect_minus(a, xi);
  } else {
    throw SideMismatch("defect kernels are defined for walk-switch and switch-walk-switch only");
  }
  return pow(Rational(a.q()), d);
}

/// Escape bound for estimate_F on a P1/P2 walk: the exact F(x, y), in floating
/// point.
inline std::function<double(const TreeVertex&)> tree_escape_certificate(const TreeWalk& op, const TreeVertex& y) {
  if (op.kind() != WalkKind::P1 && op.kind() != WalkKind::P2) {
    throw Unsupported("escape certificates exist for P1 and P2 only");
  }
  const Side side = op.kind() == WalkKind::P1 ? Side::First : Side::Second;
  const auto [a, b] = side_walk(side, op.alpha(), op.params());
  const double log_minus = std::log(f_minus(a).get_d());
  const double log_plus = std::log(f_plus(a, b).get_d());
  return [y, log_minus, log_plus](const TreeVertex& x) {
    const Level c = confluent_omega(x, y).level();
    return std::exp(static_cast<double>(x.level() - c) * log_minus + static_cast<double>(y.level() - c) * log_plus);
  };
}

/// First vertex of `vertices` where Ph != h, if any.
template <class Vertex, class Fn>
std::optional<Vertex> first_non_harmonic(const WalkOperator<Vertex>& op, const Fn& h,
                                         const std::vector<Vertex>& vertices) {
  for (const auto& v : vertices) {
    if (!is_harmonic_at(op, h, v)) return v;
  }
  return std::nullopt;
}

}  // namespace dlh
