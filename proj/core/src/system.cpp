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
#include "antler/system.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace antler {

void SystemSpec::validate() const {
  if (state_dim == 0 || input_dim == 0) {
    throw std::invalid_argument("system: state_dim and input_dim must be > 0");
  }
  if (!prior_model) throw std::invalid_argument("system: prior_model not set");
  if (process_noise_std.size() != state_dim) {
    throw std::invalid_argument(
        "system: process_noise_std needs one entry per state dimension");
  }
  for (double s : process_noise_std) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("system: process noise std must be >= 0");
    }
  }
  if (kernels.size() != 1 && kernels.size() != state_dim) {
    throw std::invalid_argument(
        "system: give one shared kernel or one kernel per state dimension");
  }
  for (const auto& k : kernels) {
    k.validate();
    k.projected_dim(augmented_dim());
  }
  if (horizon == 0) throw std::invalid_argument("system: horizon must be > 0");
}

DynamicsFn make_dynamics(const std::string& name, std::size_t state_dim,
                         std::size_t input_dim, double a, double b) {
  if (name == "zero") {
    return [](std::span<const double>, std::span<const double>,
              std::span<double> out) {
      for (double& v : out) v = 0.0;
    };
  }
  if (state_dim != input_dim) {
    throw std::invalid_argument("dynamics '" + name +
                                "' needs state_dim == input_dim");
  }
  if (name == "integrator") {
    return [](std::span<const double> x, std::span<const double> u,
              std::span<double> out) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + u[i];
    };
  }
  if (name == "linear") {
    return [a, b](std::span<const double> x, std::span<const double> u,
                  std::span<double> out) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * u[i];
    };
  }
  throw std::invalid_argument("unknown dynamics '" + name + "'");
}

void MeasurementSet::push_back(std::span<const double> input,
                               std::span<const double> target) {
  if (input.size() != state_dim + input_dim || target.size() != state_dim) {
    throw std::invalid_argument("MeasurementSet: row arity mismatch");
  }
  inputs.insert(inputs.end(), input.begin(), input.end());
  targets.insert(targets.end(), target.begin(), target.end());
}

RegressionData MeasurementSet::column(std::size_t dim) const {
  RegressionData data;
  data.input_dim = state_dim + input_dim;
  data.inputs = inputs;
  data.targets.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) data.targets.push_back(target(i)[dim]);
  return data;
}

RolloutDraws::RolloutDraws(std::size_t trajectories, std::size_t steps,
                           std::size_t state_dim, std::vector<double> values,
                           std::uint64_t seed)
    : trajectories_(trajectories),
      steps_(steps),
      state_dim_(state_dim),
      seed_(seed),
      values_(std::move(values)) {
  if (values_.size() != trajectories * steps * state_dim * 2) {
    throw std::invalid_argument("RolloutDraws: value count does not match shape");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("RolloutDraws: non-finite draw");
  }
}

RolloutDraws RolloutDraws::generate(std::size_t trajectories, std::size_t steps,
                                    std::size_t state_dim, std::uint64_t seed) {
  const std::size_t per = steps * state_dim * 2;
  std::vector<double> values(trajectories * per);
  for (std::size_t m = 0; m < trajectories; ++m) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(m),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(m) >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t k = 0; k < per; ++k) values[m * per + k] = normal(rng);
  }
  return RolloutDraws(trajectories, steps, state_dim, std::move(values), seed);
}

RolloutDraws::Slice RolloutDraws::trajectory(std::size_t m) const {
  if (m >= trajectories_) throw std::out_of_range("RolloutDraws: trajectory index");
  return Slice(values_.data() + m * steps_ * state_dim_ * 2, steps_, state_dim_);
}

RolloutDraws RolloutDraws::prefix(std::size_t trajectories) const {
  if (trajectories > trajectories_) {
    throw std::out_of_range("RolloutDraws: prefix longer than the draw set");
  }
  const std::size_t per = steps_ * state_dim_ * 2;
  std::vector<double> head(values_.begin(),
                           values_.begin() + static_cast<std::ptrdiff_t>(trajectories * per));
  return RolloutDraws(trajectories, steps_, state_dim_, std::move(head), seed_);
}

double Trajectory::total_cost() const {
  double total = 0.0;
  for (double c : stage_costs) total += c;
  return total;
}

}  // namespace antler
