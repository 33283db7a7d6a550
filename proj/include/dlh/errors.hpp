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

#include <stdexcept>
#include <string>

namespace dlh {

// Precondition failures on caller-supplied values.
struct InvalidLabel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidVertex : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UndefinedConfluent : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SideMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Unsupported : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Refusal to build a truncation larger than the configured cap.
struct SizeCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A function handed to decompose() is not harmonic on the interior.
struct PreconditionViolation : std::runtime_error {
  PreconditionViolation(const std::string& what, std::string witness_json)
      : std::runtime_error(what), witness(std::move(witness_json)) {}
  std::string witness;
};

// Internal invariant that must be unreachable (odd Busemann parity, singular
// absorbing system, nonzero residual).
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace dlh
