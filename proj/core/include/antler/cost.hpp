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
#ifndef ANTLER_COST_HPP_
#define ANTLER_COST_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace antler {

// Reference trajectory x_ref_0 ... x_ref_N for the first state coordinate.
class Reference {
 public:
  Reference() = default;
  explicit Reference(std::vector<double> values) : values_(std::move(values)) {}

  // offset + amplitude * sin(2 pi t / period + phase), t = 0 ... horizon.
  static Reference sinusoid(std::size_t horizon, double offset,
                            double amplitude, double period, double phase);
  static Reference constant(std::size_t horizon, double value);

  // Steps beyond the stored horizon repeat the last value.
  double at(std::size_t t) const {
    if (values_.empty()) return 0.0;
    return t < values_.size() ? values_[t] : values_.back();
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Immediate cost c_t(x, u) >= 0.
class StageCost {
 public:
  virtual ~StageCost() = default;
  virtual double operator()(std::size_t t, std::span<const double> x,
                            std::span<const double> u) const = 0;
  virtual std::string name() const = 0;
};

// (x_0 - x_ref_t)^2
class TrackingCost final : public StageCost {
 public:
  explicit TrackingCost(std::shared_ptr<const Reference> reference)
      : reference_(std::move(reference)) {}
  double operator()(std::size_t t, std::span<const double> x,
                    std::span<const double> u) const override;
  std::string name() const override { return "tracking"; }

 private:
  std::shared_ptr<const Reference> reference_;
};

// state_weight |x|^2 + input_weight |u|^2
class QuadraticCost final : public StageCost {
 public:
  QuadraticCost(double state_weight, double input_weight)
      : state_weight_(state_weight), input_weight_(input_weight) {}
  double operator()(std::size_t t, std::span<const double> x,
                    std::span<const double> u) const override;
  std::string name() const override { return "quadratic"; }

 private:
  double state_weight_;
  double input_weight_;
};

class ZeroCost final : public StageCost {
 public:
  double operator()(std::size_t, std::span<const double>,
                    std::span<const double>) const override {
    return 0.0;
  }
  std::string name() const override { return "zero"; }
};

}  // namespace antler

#endif  // ANTLER_COST_HPP_
