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
#ifndef ANTLER_EVALUATION_HPP_
#define ANTLER_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "antler/control_law.hpp"
#include "antler/cost.hpp"
#include "antler/learner.hpp"
#include "antler/system.hpp"

namespace antler {

// Ground truth used only for validation: f + true_g + w.
struct TrueSystemSpec {
  std::size_t state_dim = 1;
  std::size_t input_dim = 1;
  DynamicsFn prior_model;
  DynamicsFn true_g;
  std::vector<double> process_noise_std;
  std::size_t horizon = 1;
  double divergence_bound = 1e6;

  void validate() const;
};

// Built-in ground-truth functions g(x, u), by name:
//   "zero"       g = 0
//   "linear"     g = a x
//   "bump_sine"  g_i = a sin(b x_i) + c tanh(x_i - d)   (state only)
DynamicsFn make_true_g(const std::string& name, std::span<const double> params);

// Everything a true-system simulation needs besides the law and theta.
struct EvaluationSetup {
  TrueSystemSpec system;
  LearnerDataset learner_prior;                // D_0
  std::vector<double> x0;
  std::shared_ptr<const StageCost> cost;
  std::shared_ptr<const Reference> reference;  // tracking error; may be null
};

// Run i of a Monte Carlo study with master seed s uses run_seed(s, i).
std::uint64_t run_seed(std::uint64_t seed, std::size_t run);

// The law's learner accumulates realized transitions (targets
// x_next - f(x~), conditioned with sigma_w^2 noise). Deterministic in seed.
Trajectory simulate_true_system(const EvaluationSetup& setup,
                                const ControlLaw& law,
                                std::span<const double> theta,
                                std::uint64_t seed);

struct RunRecord {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  bool diverged = false;
  double total_cost = 0.0;
  std::vector<double> errors;       // x_t[0] - x_ref_t, t = 0..N
  std::vector<double> stage_costs;  // t = 0..N
};

struct McSummary {
  std::size_t runs = 0;
  std::size_t diverged = 0;
  double mean_total_cost = 0.0;
  double std_total_cost = 0.0;  // sample std (n - 1), 0 for one run
  std::vector<double> per_step_error_mean;
  std::vector<double> per_step_error_std;
  std::vector<double> per_step_cost_mean;
  std::uint64_t seed = 0;
  std::vector<RunRecord> records;
};

// Statistics over the non-diverged records.
McSummary summarize(std::vector<RunRecord> records, std::uint64_t seed);

McSummary monte_carlo(const EvaluationSetup& setup, const ControlLaw& law,
                      std::span<const double> theta, std::size_t n_runs,
                      std::uint64_t seed, int threads = 1);

struct Comparison {
  McSummary anticipating;
  McSummary baseline;
  std::size_t paired_runs = 0;  // runs where neither arm diverged
  double mean_difference = 0.0;  // anticipating - baseline
  double difference_std_error = 0.0;
};

// Paired Monte Carlo: run i of both arms shares run_seed(seed, i).
Comparison compare_laws(const EvaluationSetup& setup,
                        const ControlLaw& anticipating_law,
                        std::span<const double> theta_anticipating,
                        const ControlLaw& baseline_law,
                        std::span<const double> theta_baseline,
                        std::size_t n_runs, std::uint64_t seed, int threads = 1);

// Baseline arm is the data-independent counterpart of law at D_0.
Comparison compare_laws(const EvaluationSetup& setup,
                        std::shared_ptr<const ControlLaw> law,
                        std::span<const double> theta_anticipating,
                        std::span<const double> theta_baseline,
                        std::size_t n_runs, std::uint64_t seed, int threads = 1);

}  // namespace antler

#endif  // ANTLER_EVALUATION_HPP_
