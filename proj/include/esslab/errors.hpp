// Copyright 2026 The esslab Authors
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

#ifndef ESSLAB_ERRORS_HPP
#define ESSLAB_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace esslab {

/// The second moment of the importance weight is infinite for this target/proposal pair.
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Weights handed to a diagnostic violate its precondition (caller bug, not data pathology).
class InvalidWeightsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every `|h(x_n)| w_n` is zero: the sample set says nothing about this integrand.
class NoMassUnderH : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The replication engine could not produce a usable variance ratio.
class ReplicationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace esslab

#endif
