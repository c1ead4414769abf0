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
#ifndef ANTLER_SYSTEM_HPP_
#define ANTLER_SYSTEM_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "antler/gp.hpp"
#include "antler/kernel.hpp"

namespace antler {

// out = f(x, u). out has state_dim entries.
using DynamicsFn = std::function<void(std::span<const double> x,
                                      std::span<const double> u,
                                      std::span<double> out)>;

struct SystemSpec {
  std::size_t state_dim = 1;
  std::size_t input_dim = 1;
  DynamicsFn prior_model;
  std::vector<double> process_noise_std;  // diagonal of Sigma_w
  // One kernel shared by every output dimension, or one per dimension.
  std::vector<KernelSpec> kernels;
  std::size_t horizon = 1;

  const KernelSpec& kernel(std::size_t dim) const {
    return kernels.size() == 1 ? kernels.front() : kernels.at(dim);
  }
  std::size_t augmented_dim() const { return state_dim + input_dim; }
  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

// Built-in prior models by name:
//   "integrator": f(x, u) = x + u            (state_dim == input_dim)
//   "linear":     f(x, u) = a x + b u, elementwise with scalars a, b
//                 (state_dim == input_dim)
//   "zero":       f(x, u) = 0
DynamicsFn make_dynamics(const std::string& name, std::size_t state_dim,
                         std::size_t input_dim, double a = 1.0,
                         double b = 1.0);

// Measured transitions: augmented inputs (x, u) and, per state dimension,
// regression targets x_next - f(x, u).
struct MeasurementSet {
  std::size_t state_dim = 0;
  std::size_t input_dim = 0;
  std::vector<double> inputs;   // size() rows of state_dim + input_dim
  std::vector<double> targets;  // size() rows of state_dim

  std::size_t size() const {
    return state_dim == 0 ? 0 : targets.size() / state_dim;
  }
  std::span<const double> input(std::size_t i) const {
    const std::size_t w = state_dim + input_dim;
    return {inputs.data() + i * w, w};
  }
  std::span<const double> target(std::size_t i) const {
    return {targets.data() + i * state_dim, state_dim};
  }
  void push_back(std::span<const double> input, std::span<const double> target);
  // Regression data for one output dimension.
  RegressionData column(std::size_t dim) const;
};

// Fixed standard-normal draws indexed (trajectory, step, state dim, channel)
// with channel 0 driving the function sample and channel 1 the process
// noise. Trajectory m is generated from its own substream of the seed, so
// generate(M', ...) is a prefix of generate(M, ...) for M' <= M.
class RolloutDraws {
 public:
  class Slice {
   public:
    Slice(const double* data, std::size_t steps, std::size_t state_dim)
        : data_(data), steps_(steps), state_dim_(state_dim) {}
    double function_sample(std::size_t t, std::size_t i) const {
      return data_[(t * state_dim_ + i) * 2];
    }
    double process_noise(std::size_t t, std::size_t i) const {
      return data_[(t * state_dim_ + i) * 2 + 1];
    }
    std::size_t steps() const { return steps_; }
    std::size_t state_dim() const { return state_dim_; }

   private:
    const double* data_;
    std::size_t steps_;
    std::size_t state_dim_;
  };

  RolloutDraws() = default;
  RolloutDraws(std::size_t trajectories, std::size_t steps,
               std::size_t state_dim, std::vector<double> values,
               std::uint64_t seed);

  static RolloutDraws generate(std::size_t trajectories, std::size_t steps,
                               std::size_t state_dim, std::uint64_t seed);

  std::size_t trajectories() const { return trajectories_; }
  std::size_t steps() const { return steps_; }
  std::size_t state_dim() const { return state_dim_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const double> values() const { return values_; }

  Slice trajectory(std::size_t m) const;
  RolloutDraws prefix(std::size_t trajectories) const;

 private:
  std::size_t trajectories_ = 0;
  std::size_t steps_ = 0;
  std::size_t state_dim_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> values_;
};

struct Trajectory {
  std::size_t state_dim = 0;
  std::size_t input_dim = 0;
  std::vector<double> states;     // (N + 1) x state_dim
  std::vector<double> inputs;     // N x input_dim
  std::vector<double> terminal_input;  // u_N, used by the terminal cost
  std::vector<double> g_samples;  // N x state_dim, unknown-function values
  std::vector<double> stage_costs;  // N + 1, empty when no cost was given

  std::size_t steps() const { return input_dim == 0 ? 0 : inputs.size() / input_dim; }
  std::span<const double> state(std::size_t t) const {
    return {states.data() + t * state_dim, state_dim};
  }
  std::span<const double> input(std::size_t t) const {
    return {inputs.data() + t * input_dim, input_dim};
  }
  std::span<const double> g_sample(std::size_t t) const {
    return {g_samples.data() + t * state_dim, state_dim};
  }
  double total_cost() const;
};

}  // namespace antler

#endif  // ANTLER_SYSTEM_HPP_
