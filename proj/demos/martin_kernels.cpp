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

// Minimal harmonic functions of P_alpha on DL(q, r): first-passage constants,
// kernel values along a ray, and an exact harmonicity check on a ball.

#include <cstdio>

#include "dlh/dlh.hpp"

using namespace dlh;

int main() {
  const DLParams p(2, 3);
  const Rational alphas[] = {Rational(1, 3), Rational(1, 2), Rational(2, 3)};

  std::printf("alpha   F-(T_q)  F+(T_q)  rho^2(T_q)\n");
  for (const auto& a : alphas) {
    std::printf("%-7s %-8s %-8s %s\n", a.get_str().c_str(), f_minus(a).get_str().c_str(),
                f_plus(a, p.q).get_str().c_str(), rho_squared(a, p.q).get_str().c_str());
  }

  // K_1(x, xi) along the ray from o towards xi and one step off it.
  const Rational alpha(2, 3);
  const TreeEnd xi = TreeEnd::word({{1, 1}, {2, 1}});
  std::printf("\nK_1(x, xi) at alpha = %s, xi = %s\n", alpha.get_str().c_str(), dump(to_json(xi)).c_str());
  for (const auto& x : {TreeVertex::root(), TreeVertex(1, {{1, 1}}), TreeVertex(2, {{1, 1}, {2, 1}}),
                        TreeVertex(2, {{1, 1}}), TreeVertex(-1, {})}) {
    std::printf("  %-40s %s\n", dump(to_json(x)).c_str(),
                martin_kernel_tree(Side::First, x, xi, alpha, p).get_str().c_str());
  }

  // A nonnegative combination is P_alpha-harmonic at every vertex of the ball.
  const auto h = combine(alpha, p,
                         {{Rational(2), {Side::First, xi, alpha, p}},
                          {Rational(1, 5), {Side::Second, TreeEnd::word({{0, 2}}), alpha, p}},
                          {Rational(1), {Side::First, TreeEnd::omega(), alpha, p}}},
                         Rational(1, 2));
  const auto ball = dl_ball(4, p);
  const auto bad = first_non_harmonic(p_alpha(p, alpha), evaluator(h), ball);
  std::printf("\nh = 2 K_1(., xi) + 1/5 K_2(., xi2) + K_1(., omega) + 1/2: %s on %zu vertices\n",
              bad ? "NOT harmonic" : "harmonic", ball.size());

  // The h-transform by K_1(., omega) reverses the drift.
  const auto conj = conjugate(p_alpha(p, alpha), omega_kernel(Side::First, alpha, p));
  const DLVertex v = DLVertex::root();
  std::printf("conjugate(P_2/3, K_1(., omega)) row at o equals P_1/3 row: %s\n",
              same_row(conj.transitions(v), p_alpha(p, 1 - alpha).transitions(v)) ? "yes" : "no");
  return bad ? 1 : 0;
}
