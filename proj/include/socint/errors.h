// Copyright 2026 The socint Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOCINT_ERRORS_H_
#define SOCINT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace socint {

// Bad parameters or mismatched dimensions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A strategy emitted something that is not a distribution over actions, or
// was driven past the horizon.
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact algorithm asked to run beyond its size guard.
class UnsupportedSize : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The stage game has no Pareto-optimal Nash equilibrium we could find.
class NoPoneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A population or target distribution that violates its construction
// contract.
class InvalidPopulation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent experiment configuration / input files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace socint

#endif  // SOCINT_ERRORS_H_
