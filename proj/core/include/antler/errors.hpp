// Copyright 2026 The antler Authors
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
#ifndef ANTLER_ERRORS_HPP_
#define ANTLER_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace antler {

// Raised when a factorization or solve loses positive definiteness.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double pivot, std::size_t size)
      : std::runtime_error(what), pivot_(pivot), size_(size) {}

  // Offending squared diagonal entry (<= 0) and the factor size at failure.
  double pivot() const { return pivot_; }
  std::size_t size() const { return size_; }

 private:
  double pivot_;
  std::size_t size_;
};

// A rollout left the admissible state region. trajectory() is the index m
// of the sample trajectory (0 for single simulations), step() the time step
// whose successor state was rejected.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t trajectory,
                  std::size_t step)
      : std::runtime_error(what), trajectory_(trajectory), step_(step) {}

  std::size_t trajectory() const { return trajectory_; }
  std::size_t step() const { return step_; }

 private:
  std::size_t trajectory_;
  std::size_t step_;
};

// Configuration could not be parsed or failed validation. line() is 1-based,
// or 0 when the problem is not tied to a location in the file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(what), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace antler

#endif  // ANTLER_ERRORS_HPP_
