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

// Finite truncations of DL(q,r) and of the two trees, exact solutions of the
// boundary-value problem, the product formula for hitting probabilities, and
// the finite-stage splitting h = h1 + h2.
//
// S_i is the subtree of T_q (or T_r) below the apex a_i = (-n, {}) with levels
// in [-n, n]; its boundary is {a_i} together with the leaves on level n. S^(n)
// is the horocyclic product of S_1 and S_2, with boundary
// (leaves(S_1) x {a_2}) u ({a_1} x leaves(S_2)).

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dlh/io.hpp"
#include "dlh/kernels.hpp"
#include "dlh/linalg.hpp"
#include "dlh/walks.hpp"

namespace dlh {

inline constexpr std::size_t kDefaultTruncationCap = 1'000'000;
inline constexpr std::size_t kDenseSolveCap = 4000;

/// Vertex set with a boundary/interior partition. Boundary vertices are those
/// with a transition leaving the set.
template <class Vertex>
struct FiniteChain {
  int n = 0;
  std::vector<Vertex> vertices;
  std::unordered_map<Vertex, std::size_t> index;
  std::vector<std::size_t> boundary;
  std::vector<std::size_t> interior;
  std::vector<bool> on_boundary;

  bool contains(const Vertex& v) const { return index.contains(v); }
  std::size_t at(const Vertex& v) const {
    auto it = index.find(v);
    if (it == index.end()) throw InvalidVertex("vertex outside the truncation");
    return it->second;
  }
  /// Column of v among the boundary vertices.
  std::size_t boundary_column(const Vertex& v) const {
    const std::size_t i = at(v);
    auto it = std::find(boundary.begin(), boundary.end(), i);
    if (it == boundary.end()) throw InvalidVertex("vertex is not on the boundary");
    return static_cast<std::size_t>(it - boundary.begin());
  }
};

/// S_i with its rooted-tree structure; vertices are ordered by level, parents
/// before children, and vertices[0] is the apex.
struct TreeTruncation : FiniteChain<TreeVertex> {
  Side side = Side::First;
  int branching = 2;
  std::vector<std::ptrdiff_t> parent;
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::size_t> leaves;

  const TreeVertex& apex() const { return vertices.front(); }
};

struct DLTruncation : FiniteChain<DLVertex> {
  DLParams params{2, 2};
  TreeVertex a1, a2;
};

inline TreeVertex apex(int n) { return TreeVertex(-n, {}); }

/// sum_{k=-n}^{n} q^{n+k} r^{n-k}.
inline mpz_class truncation_size(int n, int q, int r) {
  mpz_class total(0);
  for (int k = -n; k <= n; ++k) {
    mpz_class a, b;
    mpz_ui_pow_ui(a.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(n + k));
    mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(n - k));
    total += a * b;
  }
  return total;
}

namespace detail {

// Marks boundary vertices by one-step exit and checks that every interior
// vertex can reach the boundary along positive transitions.
template <class Vertex>
void tag_boundary(FiniteChain<Vertex>& s, const WalkOperator<Vertex>& op) {
  const std::size_t n = s.vertices.size();
  s.on_boundary.assign(n, false);
  std::vector<std::vector<std::size_t>> incoming(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& t : op.transitions(s.vertices[i])) {
      if (t.weight == 0) continue;
      auto it = s.index.find(t.target);
      if (it == s.index.end()) {
        s.on_boundary[i] = true;
      } else {
        incoming[it->second].push_back(i);
      }
    }
  }
  s.boundary.clear();
  s.interior.clear();
  for (std::size_t i = 0; i < n; ++i) (s.on_boundary[i] ? s.boundary : s.interior).push_back(i);

  std::vector<bool> reaches(n, false);
  std::vector<std::size_t> queue(s.boundary.begin(), s.boundary.end());
  for (auto b : queue) reaches[b] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (auto from : incoming[queue[head]]) {
      if (!reaches[from] && !s.on_boundary[from]) {
        reaches[from] = true;
        queue.push_back(from);
      }
    }
  }
  if (queue.size() != n) throw InvariantViolation("interior vertex cannot reach the boundary");
}

inline std::size_t geometric_count(int b, int height) {
  std::size_t total = 0, layer = 1;
  for (int h = 0; h <= height; ++h, layer *= static_cast<std::size_t>(b)) total += layer;
  return total;
}

}  // namespace detail

/// S_i for the tree walk `op` (P1 on T_q or P2 on T_r).
inline TreeTruncation build_tree_truncation(int n, const TreeWalk& op, std::size_t cap = kDefaultTruncationCap) {
  if (n < 1) throw InvalidParameter("truncation depth must be at least 1");
  if (op.kind() != WalkKind::P1 && op.kind() != WalkKind::P2) {
    throw Unsupported("tree truncations are built for P1 or P2");
  }
  TreeTruncation t;
  t.n = n;
  t.side = op.kind() == WalkKind::P1 ? Side::First : Side::Second;
  t.branching = op.branching();
  const std::size_t expected = detail::geometric_count(t.branching, 2 * n);
  if (expected > cap) throw SizeCapExceeded("tree truncation has " + std::to_string(expected) + " vertices");
  const TreeParams tp(t.branching);
  t.vertices.reserve(expected);
  t.vertices.push_back(apex(n));
  t.parent.push_back(-1);
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    if (t.vertices[i].level() == n) continue;
    for (int l = 0; l < t.branching; ++l) {
      t.vertices.push_back(successor(t.vertices[i], l, tp));
      t.parent.push_back(static_cast<std::ptrdiff_t>(i));
    }
  }
  t.children.assign(t.vertices.size(), {});
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    t.index.emplace(t.vertices[i], i);
    if (t.parent[i] >= 0) t.children[static_cast<std::size_t>(t.parent[i])].push_back(i);
    if (t.vertices[i].level() == n) t.leaves.push_back(i);
  }
  detail::tag_boundary(t, op);
  std::vector<std::size_t> expected_boundary{0};
  expected_boundary.insert(expected_boundary.end(), t.leaves.begin(), t.leaves.end());
  if (t.boundary != expected_boundary) throw InvariantViolation("tree boundary differs from apex plus leaves");
  return t;
}

/// S^(n) for P_alpha on DL(q,r).
inline DLTruncation build_truncation(int n, const DLParams& p, const Rational& alpha,
                                     std::size_t cap = kDefaultTruncationCap) {
  if (n < 1) throw InvalidParameter("truncation depth must be at least 1");
  if (p.level_sum != 0) throw Unsupported("truncations require level sum 0");
  require_alpha(alpha);
  const mpz_class size = truncation_size(n, p.q, p.r);
  if (size > cap) throw SizeCapExceeded("truncation has " + size.get_str() + " vertices");

  const TreeTruncation s1 = build_tree_truncation(n, p1(p, alpha), cap);
  const TreeTruncation s2 = build_tree_truncation(n, p2(p, alpha), cap);
  std::map<Level, std::vector<std::size_t>> by_level2;
  for (std::size_t j = 0; j < s2.vertices.size(); ++j) by_level2[s2.vertices[j].level()].push_back(j);

  DLTruncation s;
  s.n = n;
  s.params = p;
  s.a1 = s1.apex();
  s.a2 = s2.apex();
  s.vertices.reserve(size.get_ui());
  for (const auto& x1 : s1.vertices) {
    for (auto j : by_level2[-x1.level()]) s.vertices.push_back({x1, s2.vertices[j]});
  }
  for (std::size_t i = 0; i < s.vertices.size(); ++i) s.index.emplace(s.vertices[i], i);
  if (s.vertices.size() != size) throw InvariantViolation("truncation size differs from the level count");

  detail::tag_boundary(s, p_alpha(p, alpha));
  std::vector<std::size_t> expected;
  for (auto l : s1.leaves) expected.push_back(s.at({s1.vertices[l], s.a2}));
  for (auto l : s2.leaves) expected.push_back(s.at({s.a1, s2.vertices[l]}));
  std::sort(expected.begin(), expected.end());
  if (s.boundary != expected) throw InvariantViolation("one-step exit set differs from the two leaf sets");
  return s;
}

/// F^{dS}(x, y) for every x in S (rows, in vertex order) and y on the boundary
/// (columns, in boundary order).
template <class Vertex>
struct HittingTable {
  std::vector<Vertex> vertices;
  std::vector<std::size_t> boundary;
  Matrix F;

  const Rational& at(const FiniteChain<Vertex>& s, const Vertex& x, const Vertex& y) const {
    return F[s.at(x)][s.boundary_column(y)];
  }
};

/// Dense exact solve of (I - P_II) X = P_IB.
template <class Vertex>
HittingTable<Vertex> hitting_table(const FiniteChain<Vertex>& s, const WalkOperator<Vertex>& op) {
  const std::size_t m = s.interior.size(), b = s.boundary.size();
  if (m > kDenseSolveCap) throw SizeCapExceeded("interior too large for a dense exact solve");
  std::vector<std::ptrdiff_t> ipos(s.vertices.size(), -1), bpos(s.vertices.size(), -1);
  for (std::size_t i = 0; i < m; ++i) ipos[s.interior[i]] = static_cast<std::ptrdiff_t>(i);
  for (std::size_t j = 0; j < b; ++j) bpos[s.boundary[j]] = static_cast<std::ptrdiff_t>(j);

  Matrix a(m, std::vector<Rational>(m)), rhs(m, std::vector<Rational>(b));
  for (std::size_t i = 0; i < m; ++i) {
    a[i][i] += 1;
    for (const auto& t : op.transitions(s.vertices[s.interior[i]])) {
      const std::size_t k = s.at(t.target);
      if (ipos[k] >= 0) {
        a[i][static_cast<std::size_t>(ipos[k])] -= t.weight;
      } else {
        rhs[i][static_cast<std::size_t>(bpos[k])] += t.weight;
      }
    }
  }
  const Matrix x = solve(a, rhs);

  HittingTable<Vertex> table{s.vertices, s.boundary, Matrix(s.vertices.size(), std::vector<Rational>(b))};
  for (std::size_t i = 0; i < m; ++i) table.F[s.interior[i]] = x[i];
  for (std::size_t j = 0; j < b; ++j) table.F[s.boundary[j]][j] = 1;
  return table;
}

/// The function on S_i with prescribed values on `fixed` (which must contain
/// the boundary) and harmonic elsewhere, by leaf-to-apex elimination
/// h(u) = A_u + B_u h(parent(u)) followed by apex-to-leaf substitution.
inline std::vector<Rational> solve_tree_dirichlet(const TreeTruncation& t, const TreeWalk& op,
                                                  const std::unordered_map<std::size_t, Rational>& fixed) {
  const std::size_t n = t.vertices.size();
  for (auto b : t.boundary) {
    if (!fixed.contains(b)) throw InvalidParameter("boundary value missing");
  }
  std::vector<Rational> coef_a(n), coef_b(n);
  for (std::size_t idx = n; idx-- > 0;) {
    if (auto it = fixed.find(idx); it != fixed.end()) {
      coef_a[idx] = it->second;
      continue;
    }
    Rational num(0), self(1), up(0);
    for (const auto& tr : op.transitions(t.vertices[idx])) {
      const std::size_t k = t.at(tr.target);
      if (static_cast<std::ptrdiff_t>(k) == t.parent[idx]) {
        up += tr.weight;
      } else {
        num += tr.weight * coef_a[k];
        self -= tr.weight * coef_b[k];
      }
    }
    if (self == 0) throw InvariantViolation("degenerate tree elimination");
    coef_a[idx] = num / self;
    coef_b[idx] = up / self;
  }
  std::vector<Rational> h(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    h[idx] = coef_a[idx];
    if (coef_b[idx] != 0) h[idx] += coef_b[idx] * h[static_cast<std::size_t>(t.parent[idx])];
  }
  return h;
}

/// F^{dS_i}(., y) as a column: boundary data delta_y, with y optionally an
/// extra absorbing vertex not on the boundary.
inline std::vector<Rational> tree_hitting_column(const TreeTruncation& t, const TreeWalk& op, std::size_t y) {
  std::unordered_map<std::size_t, Rational> fixed;
  for (auto b : t.boundary) fixed.emplace(b, Rational(0));
  fixed[y] = 1;
  return solve_tree_dirichlet(t, op, fixed);
}

/// Full table on S_i by tree elimination, one column per boundary vertex.
inline HittingTable<TreeVertex> tree_hitting(const TreeTruncation& t, const TreeWalk& op) {
  HittingTable<TreeVertex> table{t.vertices, t.boundary,
                                 Matrix(t.vertices.size(), std::vector<Rational>(t.boundary.size()))};
  for (std::size_t j = 0; j < t.boundary.size(); ++j) {
    const auto col = tree_hitting_column(t, op, t.boundary[j]);
    for (std::size_t i = 0; i < col.size(); ++i) table.F[i][j] = col[i];
  }
  return table;
}

/// Level-indexed first-passage factors of S_i. up(k): from level k to the
/// parent before exiting; down(k): from level k-1 to a given child at level k.
class TreeHittingClosedForm {
 public:
  TreeHittingClosedForm(int n, const TreeWalk& op) : n_(n) {
    if (op.kind() != WalkKind::P1 && op.kind() != WalkKind::P2) throw Unsupported("closed form needs P1 or P2");
    const auto& w = *op.constant_weights();
    const Rational p_up = w.front(), p_s = w.back();
    const int b = op.branching();
    up_.assign(static_cast<std::size_t>(2 * n + 1), Rational(0));
    down_.assign(static_cast<std::size_t>(2 * n + 1), Rational(0));
    for (int k = n - 1; k > -n; --k) up_[slot(k)] = p_up / (1 - b * p_s * up_[slot(k + 1)]);
    for (int k = -n + 2; k <= n; ++k) {
      down_[slot(k)] = p_s / (1 - (b - 1) * p_s * (k < n ? up_[slot(k)] : Rational(0)) - p_up * down_[slot(k - 1)]);
    }
  }

  /// F^{dS_i}(x, y) for x, y in S_i.
  Rational operator()(const TreeVertex& x, const TreeVertex& y) const {
    if (x == y) return 1;
    if (x.level() == n_ || x.level() == -n_) return 0;
    const Level c = confluent_omega(x, y).level();
    if (c == -n_ && y.level() != -n_) return 0;
    Rational f(1);
    for (Level k = x.level(); k > c; --k) f *= up_[slot(k)];
    for (Level k = c + 1; k <= y.level(); ++k) f *= down_[slot(k)];
    return f;
  }

 private:
  std::size_t slot(Level k) const { return static_cast<std::size_t>(k + n_); }
  int n_;
  std::vector<Rational> up_, down_;
};

inline HittingTable<TreeVertex> tree_hitting_closed_form(const TreeTruncation& t, const TreeWalk& op) {
  const TreeHittingClosedForm f(t.n, op);
  HittingTable<TreeVertex> table{t.vertices, t.boundary,
                                 Matrix(t.vertices.size(), std::vector<Rational>(t.boundary.size()))};
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    for (std::size_t j = 0; j < t.boundary.size(); ++j) table.F[i][j] = f(t.vertices[i], t.vertices[t.boundary[j]]);
  }
  return table;
}

struct ProductDiscrepancy {
  DLVertex x;
  DLVertex y;
  Rational dl_value;
  Rational tree_value;
};

struct ProductReport {
  std::size_t checked = 0;
  std::vector<ProductDiscrepancy> discrepancies;
  bool ok() const { return discrepancies.empty(); }
};

/// Checks F^{dS}(x1x2, y1a2) = F1(x1, y1) and F^{dS}(x1x2, a1y2) = F2(x2, y2)
/// for every x1x2 in S and every leaf y_i.
inline ProductReport verify_product_formula(const DLTruncation& s, const HittingTable<DLVertex>& table,
                                            const Rational& alpha) {
  const auto op1 = p1(s.params, alpha), op2 = p2(s.params, alpha);
  const TreeTruncation s1 = build_tree_truncation(s.n, op1), s2 = build_tree_truncation(s.n, op2);
  const auto f1 = tree_hitting(s1, op1), f2 = tree_hitting(s2, op2);
  ProductReport report;
  for (std::size_t j = 0; j < s.boundary.size(); ++j) {
    const DLVertex& y = s.vertices[s.boundary[j]];
    const bool first_leaf = y.x2 == s.a2;
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
      const DLVertex& x = s.vertices[i];
      const Rational& expected = first_leaf ? f1.at(s1, x.x1, y.x1) : f2.at(s2, x.x2, y.x2);
      ++report.checked;
      if (table.F[i][j] != expected) report.discrepancies.push_back({x, y, table.F[i][j], expected});
    }
  }
  return report;
}

/// sum_y F^{dS}(x, y) data(y); data indexed by boundary column.
template <class Vertex>
std::vector<Rational> represent(const HittingTable<Vertex>& table, const std::vector<Rational>& boundary_data) {
  if (boundary_data.size() != table.boundary.size()) throw InvalidParameter("boundary data has the wrong length");
  std::vector<Rational> out(table.vertices.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < boundary_data.size(); ++j) {
      if (table.F[i][j] != 0 && boundary_data[j] != 0) out[i] += table.F[i][j] * boundary_data[j];
    }
  }
  return out;
}

/// Finite-stage splitting of an interior-harmonic h on S^(n).
struct Decomposition {
  TreeTruncation s1, s2;
  std::vector<Rational> h1;  // on s1.vertices
  std::vector<Rational> h2;  // on s2.vertices
  /// On s_i.boundary; zero at the apex, empty where F_i(o_i, y_i) = 0.
  std::vector<std::optional<Rational>> lambda1, lambda2;
};

inline Decomposition decompose(const DLFunction& h, int n, const DLParams& p, const Rational& alpha) {
  const DLTruncation s = build_truncation(n, p, alpha);
  const DLWalk op = p_alpha(p, alpha);
  for (auto i : s.interior) {
    if (!is_harmonic_at(op, h, s.vertices[i])) {
      throw PreconditionViolation("function is not harmonic on the interior", dump(to_json(s.vertices[i])));
    }
  }
  const auto op1 = p1(p, alpha), op2 = p2(p, alpha);
  Decomposition d{build_tree_truncation(n, op1), build_tree_truncation(n, op2), {}, {}, {}, {}};
  const auto f1 = tree_hitting(d.s1, op1), f2 = tree_hitting(d.s2, op2);

  std::vector<Rational> data1(d.s1.boundary.size()), data2(d.s2.boundary.size());
  for (std::size_t j = 1; j < data1.size(); ++j) data1[j] = h({d.s1.vertices[d.s1.boundary[j]], s.a2});
  for (std::size_t j = 1; j < data2.size(); ++j) data2[j] = h({s.a1, d.s2.vertices[d.s2.boundary[j]]});
  d.h1 = represent(f1, data1);
  d.h2 = represent(f2, data2);

  auto weights = [](const TreeTruncation& t, const HittingTable<TreeVertex>& f, const std::vector<Rational>& data) {
    std::vector<std::optional<Rational>> lambda(data.size());
    lambda[0] = Rational(0);
    const std::size_t o = t.at(TreeVertex::root());
    for (std::size_t j = 1; j < data.size(); ++j) {
      if (f.F[o][j] != 0) lambda[j] = Rational(data[j] / f.F[o][j]);
    }
    return lambda;
  };
  d.lambda1 = weights(d.s1, f1, data1);
  d.lambda2 = weights(d.s2, f2, data2);

  for (const auto& v : s.vertices) {
    if (d.h1[d.s1.at(v.x1)] + d.h2[d.s2.at(v.x2)] != h(v)) {
      throw InvariantViolation("finite splitting does not reconstruct h");
    }
  }
  return d;
}

/// K_i^(n)(x, xi) together with the hitting data behind it.
struct KernelApprox {
  Rational value;
  TreeVertex target;      // boundary representative of xi
  TreeVertex confluent;   // x ∧ xi
  Rational f_x_confluent;  // F^{dS_i}(x, c)
  Rational f_o_confluent;  // F^{dS_i}(o, c)
};

/// The leaf on level n of xi if the o-geodesic to xi stays above the apex,
/// otherwise the apex.
inline TreeVertex boundary_representative(const TreeTruncation& t, const TreeEnd& xi) {
  if (!xi.is_omega() && confluent_omega_end(TreeVertex::root(), xi).level() > -t.n) {
    return end_vertex_at(xi, t.n);
  }
  return t.apex();
}

inline KernelApprox kernel_approx(const TreeTruncation& t, const TreeWalk& op, const TreeVertex& x,
                                  const TreeEnd& xi) {
  if (!t.contains(x)) throw InvalidVertex("vertex outside the truncation");
  const TreeVertex o = TreeVertex::root();
  KernelApprox out{Rational(0), boundary_representative(t, xi), confluent_root(x, xi), Rational(0), Rational(0)};
  const auto to_y = tree_hitting_column(t, op, t.at(out.target));
  if (to_y[t.at(o)] == 0) throw InvariantViolation("boundary representative unreachable from the root");
  out.value = to_y[t.at(x)] / to_y[t.at(o)];
  if (t.contains(out.confluent)) {
    const auto to_c = tree_hitting_column(t, op, t.at(out.confluent));
    out.f_x_confluent = to_c[t.at(x)];
    out.f_o_confluent = to_c[t.at(o)];
  }
  return out;
}

/// {"vertices": [...], "boundary": [...], "F": [[...]]}.
template <class Vertex>
Json to_json(const HittingTable<Vertex>& table) {
  Json vertices = Json::array(), boundary = Json::array(), f = Json::array();
  for (const auto& v : table.vertices) vertices.push_back(to_json(v));
  for (auto b : table.boundary) boundary.push_back(to_json(table.vertices[b]));
  for (const auto& row : table.F) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(to_json(x));
    f.push_back(std::move(r));
  }
  return {{"vertices", vertices}, {"boundary", boundary}, {"F", f}};
}

}  // namespace dlh
