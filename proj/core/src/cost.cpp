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
#include "antler/cost.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace antler {

Reference Reference::sinusoid(std::size_t horizon, double offset,
                              double amplitude, double period, double phase) {
  if (!(period > 0.0)) throw std::invalid_argument("reference period must be > 0");
  std::vector<double> v(horizon + 1);
  for (std::size_t t = 0; t <= horizon; ++t) {
    v[t] = offset + amplitude * std::sin(2.0 * std::numbers::pi *
                                             static_cast<double>(t) / period +
                                         phase);
  }
  return Reference(std::move(v));
}

Reference Reference::constant(std::size_t horizon, double value) {
  return Reference(std::vector<double>(horizon + 1, value));
}

double TrackingCost::operator()(std::size_t t, std::span<const double> x,
                                std::span<const double>) const {
  const double e = x[0] - reference_->at(t);
  return e * e;
}

double QuadraticCost::operator()(std::size_t, std::span<const double> x,
                                 std::span<const double> u) const {
  double sx = 0.0, su = 0.0;
  for (double v : x) sx += v * v;
  for (double v : u) su += v * v;
  return state_weight_ * sx + input_weight_ * su;
}

}  // namespace antler
