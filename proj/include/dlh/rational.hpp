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

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "dlh/errors.hpp"

namespace dlh {

/// Exact rational number in canonical (reduced, positive denominator) form.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw InvalidParameter("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "NUM/DEN" or "NUM". Whitespace is not accepted.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InvalidParameter("empty rational");
  Rational r;
  if (r.set_str(std::string(text), 10) != 0) {
    throw InvalidParameter("malformed rational: " + std::string(text));
  }
  if (r.get_den() == 0) throw InvalidParameter("rational with zero denominator");
  r.canonicalize();
  return r;
}

/// "NUM/DEN", or "NUM" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.get_str(10); }

/// Integer power with a possibly negative exponent. base must be nonzero when
/// exponent < 0.
inline Rational pow(const Rational& base, std::int64_t exponent) {
  if (exponent == 0) return Rational(1);
  if (base == 0) {
    if (exponent < 0) throw InvariantViolation("zero to a negative power");
    return Rational(0);
  }
  const auto e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational out = exponent > 0 ? Rational(num, den) : Rational(den, num);
  out.canonicalize();
  return out;
}

/// Number of bits in numerator plus denominator; used to pick light pivots.
inline std::size_t bit_size(const Rational& r) {
  return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

/// Validates 0 < alpha < 1.
inline const Rational& require_alpha(const Rational& alpha) {
  if (alpha <= 0 || alpha >= 1) {
    throw InvalidParameter("alpha must lie strictly between 0 and 1, got " + to_string(alpha));
  }
  return alpha;
}

}  // namespace dlh
