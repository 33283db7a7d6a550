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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "support/oracles.hpp"

using namespace dlh;

TEST_CASE("SplitMix64 streams") {
  CHECK(SplitMix64::stream(7, 0).next() == SplitMix64::stream(7, 0).next());
  CHECK(SplitMix64::stream(7, 0).next() != SplitMix64::stream(7, 1).next());
  CHECK(SplitMix64::stream(7, 0).next() != SplitMix64::stream(8, 0).next());
  // Reference output of the generator seeded with 0.
  SplitMix64 g(0);
  CHECK(g.next() == 0xe220a8397b1dcdafULL);
  CHECK(g.next() == 0x6e789e6aa1b965f4ULL);
  SplitMix64 h(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(h.below(1) == 0);
    const double u = h.uniform();
    CHECK((u >= 0 && u < 1));
  }
}

TEST_CASE("bounded draws are uniform") {
  SplitMix64 g(99);
  const std::uint64_t n = 7;
  const int draws = 700000;
  std::vector<int> count(n);
  for (int i = 0; i < draws; ++i) {
    const auto v = g.below(n);
    REQUIRE(v < n);
    ++count[v];
  }
  const double e = draws / 7.0, sd = std::sqrt(draws * (1.0 / 7) * (6.0 / 7));
  for (int c : count) CHECK(std::abs(c - e) < 4 * sd);
}

TEST_CASE("trajectories") {
  const DLParams p(2, 3);
  const auto op = p_alpha(p, Rational(1, 3));
  const DLVertex o = DLVertex::root();
  CHECK(simulate(op, o, 0, 5).steps.empty());
  const auto a = simulate(op, o, 500, 5), b = simulate(op, o, 500, 5), c = simulate(op, o, 500, 6);
  CHECK(a.steps == b.steps);
  CHECK(a.steps != c.steps);
  CHECK(a.seed == 5);
  REQUIRE(a.steps.size() == 500);
  DLVertex prev = o;
  for (const auto& v : a.steps) {
    const auto nb = dl_neighbours(prev, p);
    CHECK(std::find(nb.begin(), nb.end(), v) != nb.end());
    prev = v;
  }
  // Vertex-dependent rows go through the general path.
  const auto proj = project(q_alpha(p, Rational(1, 2)));
  prev = o;
  for (const auto& v : simulate(proj, o, 200, 1).steps) {
    const auto nb = dl_neighbours(prev, p);
    CHECK(std::find(nb.begin(), nb.end(), v) != nb.end());
    prev = v;
  }
}

TEST_CASE("one-step frequencies match the transition row") {
  const DLParams p(2, 3);
  for (const auto& alpha : {Rational(1, 3), Rational(3, 4)}) {
    const auto op = p_alpha(p, alpha);
    const DLVertex o = DLVertex::root();
    const int n = 100000;
    std::map<DLVertex, int> count;
    for (int s = 0; s < n; ++s) ++count[simulate(op, o, 1, static_cast<std::uint64_t>(s)).steps[0]];
    for (const auto& t : op.transitions(o)) {
      const double pr = t.weight.get_d();
      const double sd = std::sqrt(n * pr * (1 - pr));
      CHECK(std::abs(count[t.target] - n * pr) < 4 * sd);
    }
    CHECK(count.size() == 5);
  }
}

TEST_CASE("hitting estimates") {
  const DLParams p(2, 2);
  const TreeVertex o = TreeVertex::root();
  SECTION("start equals target") {
    const auto r = estimate_F(p1(p, Rational(2, 3)), o, o, 100, 10, 1);
    CHECK(r.point_estimate == 1);
    CHECK(r.half_width_95 == 0);
    CHECK(r.hits == 100);
  }
  struct Case {
    Rational alpha;
    TreeVertex target;
  };
  for (const auto& c : {Case{Rational(2, 3), TreeVertex(-1, {})}, Case{Rational(1, 3), TreeVertex(1, {{1, 1}})},
                        Case{Rational(3, 4), TreeVertex(2, {{2, 1}})}}) {
    const auto op = p1(p, c.alpha);
    const double exact = tree_hitting_probability(Side::First, o, c.target, c.alpha, p).get_d();
    const auto r = estimate_F(op, o, c.target, 40000, 2000, 17, tree_escape_certificate(op, c.target));
    const double sd = std::sqrt(exact * (1 - exact) / 40000);
    CHECK(std::abs(r.point_estimate - exact) < 4 * sd);
    CHECK(r.truncated_runs < 400);
    CHECK(r.hits + r.escaped_runs + r.truncated_runs == r.trials);
    CHECK(r.half_width_95 == Catch::Approx(1.96 * std::sqrt(r.point_estimate * (1 - r.point_estimate) / 40000)));
  }
}

TEST_CASE("estimates do not depend on the thread count") {
  const DLParams p(2, 3);
  const auto op = p_alpha(p, Rational(1, 2));
  const DLVertex y{TreeVertex(1, {}), TreeVertex(-1, {})};
  EstimateOptions one{1e-9, 1}, many{1e-9, 5};
  const auto a = estimate_F(op, DLVertex::root(), y, 3000, 200, 42, {}, one);
  const auto b = estimate_F(op, DLVertex::root(), y, 3000, 200, 42, {}, many);
  CHECK(a.hits == b.hits);
  CHECK(a.truncated_runs == b.truncated_runs);
  CHECK(a.point_estimate == b.point_estimate);
}

TEST_CASE("simulation input errors") {
  const DLParams p(2, 2);
  const auto op = p1(p, Rational(1, 2));
  CHECK_THROWS_AS(estimate_F(op, TreeVertex::root(), TreeVertex::root(), 0, 10, 1), InvalidParameter);
  CHECK_THROWS_AS(estimate_F(op, TreeVertex::root(), TreeVertex::root(), 10, 0, 1), InvalidParameter);
  Rational tiny(1);
  for (int i = 0; i < 70; ++i) tiny /= 2;
  CHECK_THROWS_AS(detail::CumulativeRow({tiny, Rational(1 - tiny)}), Unsupported);
  const auto conj = conjugate(op, TreeFunction([](const TreeVertex&) { return Rational(1); }));
  CHECK_THROWS_AS(tree_escape_certificate(conj, TreeVertex::root()), Unsupported);
}
