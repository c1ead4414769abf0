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
#ifndef ANTLER_SAA_HPP_
#define ANTLER_SAA_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "antler/control_law.hpp"
#include "antler/cost.hpp"
#include "antler/system.hpp"
#include "antler/world_model.hpp"

namespace antler {

// Sample-average objective with the draws held fixed: a deterministic
// function of theta.
struct SaaProblem {
  std::shared_ptr<const WorldModel> model;
  std::shared_ptr<const ControlLaw> law;
  std::shared_ptr<const StageCost> cost;
  std::vector<double> x0;
  RolloutDraws draws;
  int threads = 1;  // rollouts evaluated concurrently; 0 = all cores

  std::size_t sample_count() const { return draws.trajectories(); }
  void validate() const;
};

// (1/M) sum_m sum_t c_t(x_t^(m), u_t^(m)). Per-trajectory totals are reduced
// with a fixed pairwise tree, so the value does not depend on threads.
// Throws DivergenceError naming the lowest diverged trajectory.
double saa_cost(const SaaProblem& problem, std::span<const double> theta);

// Central differences per coordinate with h = max(1e-6, 1e-6 |theta_i|);
// one-sided at the box boundary or when one probe diverges.
std::vector<double> saa_cost_gradient(const SaaProblem& problem,
                                      std::span<const double> theta);

struct OptimizerOptions {
  int n_starts = 8;
  std::uint64_t seed = 0;
  int max_iterations = 100;
  double armijo = 1e-4;
  double shrink = 0.5;
  double theta_tolerance = 1e-5;
  double cost_tolerance = 1e-8;
  // Used before any uniformly sampled starts; counts toward n_starts.
  std::vector<std::vector<double>> initial_points;
};

struct StartRecord {
  std::vector<double> initial_theta;
  std::vector<double> final_theta;
  double final_cost = 0.0;     // +inf when the start diverged
  int iterations = 0;
  bool converged = false;      // stopping rule met before the iteration cap
  bool diverged = false;
  double gradient_norm = 0.0;  // projected gradient norm at final_theta
  std::vector<double> cost_history;  // cost after each accepted step, [0] = start
};

struct OptResult {
  std::vector<double> theta_star;
  double cost_star = 0.0;
  double gradient_norm = 0.0;
  std::size_t best_start = 0;
  std::vector<StartRecord> starts;
};

// Multi-start projected gradient descent with Barzilai-Borwein trial steps
// and Armijo backtracking. Throws std::runtime_error if every start diverges.
OptResult antler_optimize(const SaaProblem& problem,
                          const OptimizerOptions& options = {});

struct StudyRow {
  std::size_t samples = 0;
  std::vector<double> theta;
  double cost = 0.0;
  double wall_time_s = 0.0;
  OptResult result;
};

// Optimizes on nested prefixes of problem.draws (which must hold at least
// max(sample_counts) trajectories), one row per entry.
std::vector<StudyRow> convergence_study(const SaaProblem& problem,
                                        std::span<const std::size_t> sample_counts,
                                        const OptimizerOptions& options = {});

}  // namespace antler

#endif  // ANTLER_SAA_HPP_
