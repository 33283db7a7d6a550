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

// Exact Dirichlet problem on the truncation S^(n) of DL(2, 2): hitting
// distribution from the root, the product formula against the tree tables,
// and the finite splitting of a harmonic function.

#include <cstdio>

#include "dlh/dlh.hpp"

using namespace dlh;

int main() {
  const DLParams p(2, 2);
  const Rational alpha(1, 2);
  const int n = 1;

  const auto s = build_truncation(n, p, alpha);
  const auto table = hitting_table(s, p_alpha(p, alpha));
  std::printf("S^(%d): %zu vertices, %zu boundary, %zu interior\n", n, s.vertices.size(), s.boundary.size(),
              s.interior.size());

  const std::size_t o = s.at(DLVertex::root());
  std::printf("\nF(o, y) for y on the boundary\n");
  for (std::size_t j = 0; j < s.boundary.size(); ++j) {
    std::printf("  %-70s %s\n", dump(to_json(s.vertices[s.boundary[j]])).c_str(), table.F[o][j].get_str().c_str());
  }

  const auto report = verify_product_formula(s, table, alpha);
  std::printf("\nproduct formula: %zu entries checked, %zu discrepancies\n", report.checked,
              report.discrepancies.size());

  const auto h = evaluator(combine(alpha, p, {{Rational(3), {Side::First, TreeEnd::word({{1, 1}}), alpha, p}}},
                                   Rational(1)));
  const auto d = decompose(h, 2, p, alpha);
  std::printf("\nh = 3 K_1(., xi) + 1 on S^(2): h1 at o1 = %s, h2 at o2 = %s, h(o) = %s\n",
              d.h1[d.s1.at(TreeVertex::root())].get_str().c_str(), d.h2[d.s2.at(TreeVertex::root())].get_str().c_str(),
              h(DLVertex::root()).get_str().c_str());
  return report.ok() ? 0 : 1;
}
