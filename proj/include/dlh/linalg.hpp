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

// Dense exact linear algebra over Q.

#include <cstddef>
#include <vector>

#include "dlh/rational.hpp"

namespace dlh {

using Matrix = std::vector<std::vector<Rational>>;

namespace detail {

// Row of the lightest nonzero entry in `col` among rows [from, end).
inline std::ptrdiff_t lightest_pivot(const Matrix& m, std::size_t col, std::size_t from) {
  std::ptrdiff_t best = -1;
  std::size_t best_bits = 0;
  for (std::size_t i = from; i < m.size(); ++i) {
    if (m[i][col] == 0) continue;
    const std::size_t b = bit_size(m[i][col]);
    if (best < 0 || b < best_bits) {
      best = static_cast<std::ptrdiff_t>(i);
      best_bits = b;
    }
  }
  return best;
}

inline void eliminate(std::vector<Rational>& target, const std::vector<Rational>& pivot_row, const Rational& factor,
                      std::size_t from) {
  for (std::size_t j = from; j < target.size(); ++j) {
    if (pivot_row[j] != 0) target[j] -= factor * pivot_row[j];
  }
}

}  // namespace detail

/// Solves A X = B for square nonsingular A by Gauss-Jordan elimination with
/// lightest-pivot selection. Throws InvariantViolation when A is singular or
/// the exact residual A X - B is nonzero.
inline Matrix solve(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw InvalidParameter("right-hand side height differs from matrix size");
  const std::size_t m = n ? b[0].size() : 0;
  Matrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw InvalidParameter("matrix is not square");
    aug[i].reserve(n + m);
    aug[i].insert(aug[i].end(), a[i].begin(), a[i].end());
    aug[i].insert(aug[i].end(), b[i].begin(), b[i].end());
  }
  for (std::size_t col = 0; col < n; ++col) {
    const auto p = detail::lightest_pivot(aug, col, col);
    if (p < 0) throw InvariantViolation("singular linear system");
    std::swap(aug[col], aug[static_cast<std::size_t>(p)]);
    const Rational inv = 1 / aug[col][col];
    for (std::size_t j = col; j < n + m; ++j) {
      if (aug[col][j] != 0) aug[col][j] *= inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || aug[i][col] == 0) continue;
      const Rational f = aug[i][col];
      detail::eliminate(aug[i], aug[col], f, col);
    }
  }
  Matrix x(n, std::vector<Rational>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) x[i][j] = aug[i][n + j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Rational s(0);
      for (std::size_t k = 0; k < n; ++k) {
        if (a[i][k] != 0) s += a[i][k] * x[k][j];
      }
      if (s != b[i][j]) throw InvariantViolation("nonzero residual after exact solve");
    }
  }
  return x;
}

/// Exact rank by forward elimination.
inline std::size_t rank(Matrix m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t col = 0; col < cols && r < m.size(); ++col) {
    const auto p = detail::lightest_pivot(m, col, r);
    if (p < 0) continue;
    std::swap(m[r], m[static_cast<std::size_t>(p)]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][col] == 0) continue;
      const Rational f = m[i][col] / m[r][col];
      detail::eliminate(m[i], m[r], f, col);
    }
    ++r;
  }
  return r;
}

}  // namespace dlh
