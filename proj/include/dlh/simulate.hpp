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

// Trajectory sampling and Monte-Carlo hitting estimates.
//
// Randomness: every trial owns an independent SplitMix64 stream whose state is
// mix(seed) ^ mix(trial + 1), with mix the SplitMix64 finalizer. Steps are drawn
// with Lemire's bounded-integer method over the exact common denominator of the
// row, so results are bit-reproducible for a given (seed, trial) on any
// platform and independent of the thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <thread>
#include <vector>

#include "dlh/walks.hpp"

namespace dlh {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t trial) {
    return SplitMix64(mix(seed) ^ mix(trial + 1));
  }

  std::uint64_t next() { return mix(state_ += 0x9e3779b97f4a7c15ULL); }

  /// Uniform on [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    __uint128_t m = static_cast<__uint128_t>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<__uint128_t>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

namespace detail {

// Integer cumulative weights over the common denominator of a row.
struct CumulativeRow {
  std::vector<std::uint64_t> cumulative;
  std::uint64_t total = 0;

  explicit CumulativeRow(const std::vector<Rational>& weights) {
    mpz_class den(1);
    for (const auto& w : weights) {
      if (w < 0) throw InvariantViolation("negative transition weight");
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), w.get_den_mpz_t());
    }
    mpz_class acc(0);
    for (const auto& w : weights) {
      acc += w.get_num() * (den / w.get_den());
      if (!acc.fits_ulong_p()) throw Unsupported("transition denominators exceed 64 bits");
      cumulative.push_back(acc.get_ui());
    }
    total = cumulative.empty() ? 0 : cumulative.back();
    if (total == 0) throw InvariantViolation("row with zero total weight");
  }

  std::size_t pick(SplitMix64& rng) const {
    const std::uint64_t u = rng.below(total);
    return static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                    cumulative.begin());
  }
};

template <class Vertex>
Vertex step(const WalkOperator<Vertex>& op, const std::optional<CumulativeRow>& fixed, const Vertex& v,
            SplitMix64& rng) {
  if (fixed) return std::move(op.targets(v)[fixed->pick(rng)]);
  auto row = op.transitions(v);
  std::vector<Rational> w;
  w.reserve(row.size());
  for (const auto& t : row) w.push_back(t.weight);
  return std::move(row[CumulativeRow(w).pick(rng)].target);
}

template <class Vertex>
std::optional<CumulativeRow> fixed_row(const WalkOperator<Vertex>& op) {
  if (op.constant_weights()) return CumulativeRow(*op.constant_weights());
  return std::nullopt;
}

}  // namespace detail

template <class Vertex>
struct Trajectory {
  Vertex start;
  std::vector<Vertex> steps;
  std::uint64_t seed = 0;
};

/// A reproducible run of n_steps steps; uses stream (seed, 0).
template <class Vertex>
Trajectory<Vertex> simulate(const WalkOperator<Vertex>& op, const Vertex& start, std::size_t n_steps,
                            std::uint64_t seed) {
  const auto fixed = detail::fixed_row(op);
  auto rng = SplitMix64::stream(seed, 0);
  Trajectory<Vertex> out{start, {}, seed};
  out.steps.reserve(n_steps);
  Vertex cur = start;
  for (std::size_t i = 0; i < n_steps; ++i) {
    cur = detail::step(op, fixed, cur, rng);
    out.steps.push_back(cur);
  }
  return out;
}

struct EstimateResult {
  double point_estimate = 0;
  double half_width_95 = 0;
  std::size_t trials = 0;
  std::size_t horizon = 0;
  std::size_t truncated_runs = 0;
  /// Runs stopped early by the escape certificate.
  std::size_t escaped_runs = 0;
  std::size_t hits = 0;
};

/// Upper bound on the probability of ever reaching the target from a vertex.
template <class Vertex>
using EscapeBound = std::function<double(const Vertex&)>;

struct EstimateOptions {
  /// A run is certified escaped once the bound drops below this.
  double escape_epsilon = 1e-9;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Fraction of runs from x that visit y within `horizon` steps. A run that
/// neither hits y nor is certified escaped by `bound` counts as truncated; the
/// estimate is a lower bound for F(x, y).
template <class Vertex>
EstimateResult estimate_F(const WalkOperator<Vertex>& op, const Vertex& x, const Vertex& y, std::size_t trials,
                          std::size_t horizon, std::uint64_t seed, EscapeBound<Vertex> bound = {},
                          EstimateOptions opts = {}) {
  if (trials == 0 || horizon == 0) throw InvalidParameter("trials and horizon must be positive");
  const auto fixed = detail::fixed_row(op);

  enum class Outcome : std::uint8_t { Hit, Escaped, Truncated };
  std::vector<Outcome> outcome(trials, Outcome::Truncated);
  auto run_trial = [&](std::size_t trial) {
    if (x == y) {
      outcome[trial] = Outcome::Hit;
      return;
    }
    auto rng = SplitMix64::stream(seed, trial);
    Vertex cur = x;
    for (std::size_t t = 0; t < horizon; ++t) {
      cur = detail::step(op, fixed, cur, rng);
      if (cur == y) {
        outcome[trial] = Outcome::Hit;
        return;
      }
      if (bound && bound(cur) < opts.escape_epsilon) {
        outcome[trial] = Outcome::Escaped;
        return;
      }
    }
  };

  unsigned n_threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, trials));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < trials; ++i) run_trial(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < trials; i += n_threads) run_trial(i);
      });
    }
  }

  EstimateResult r;
  r.trials = trials;
  r.horizon = horizon;
  for (auto o : outcome) {
    r.hits += o == Outcome::Hit;
    r.escaped_runs += o == Outcome::Escaped;
    r.truncated_runs += o == Outcome::Truncated;
  }
  const double p = static_cast<double>(r.hits) / static_cast<double>(trials);
  r.point_estimate = p;
  r.half_width_95 = 1.96 * std::sqrt(p * (1 - p) / static_cast<double>(trials));
  return r;
}

}  // namespace dlh
