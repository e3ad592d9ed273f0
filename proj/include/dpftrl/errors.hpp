// Copyright 2026 The dpftrl Authors
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

#ifndef DPFTRL_ERRORS_HPP_
#define DPFTRL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dpftrl {

// Bad argument values or non-finite inputs.
class InvalidInputError : public std::invalid_argument {
 public:
  explicit InvalidInputError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Leaves must be appended strictly in order t = 1, 2, ...
class OrderingError : public std::logic_error {
 public:
  explicit OrderingError(const std::string& what) : std::logic_error(what) {}
};

// A vector handed to the aggregation tree exceeded the clipping norm.
class SensitivityViolationError : public std::runtime_error {
 public:
  explicit SensitivityViolationError(const std::string& what)
      : std::runtime_error(what) {}
};

// The regularized least-squares system 2*W + lambda*I was not positive
// definite; a larger lambda is needed.
class IndefiniteSystemError : public std::runtime_error {
 public:
  explicit IndefiniteSystemError(const std::string& what)
      : std::runtime_error(what) {}
};

// Noise calibration could not bracket the target within its search range.
class CalibrationError : public std::runtime_error {
 public:
  explicit CalibrationError(const std::string& what)
      : std::runtime_error(what) {}
};

// A memoized computation exceeded its configured budget.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

// A combination of options with no implemented solver (e.g. ball + l1).
class UnsupportedError : public std::logic_error {
 public:
  explicit UnsupportedError(const std::string& what)
      : std::logic_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dpftrl

#endif  // DPFTRL_ERRORS_HPP_
