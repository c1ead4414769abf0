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
#ifndef ANTLER_WORLD_MODEL_HPP_
#define ANTLER_WORLD_MODEL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "antler/control_law.hpp"
#include "antler/cost.hpp"
#include "antler/gp.hpp"
#include "antler/learner.hpp"
#include "antler/system.hpp"

namespace antler {

struct WorldOptions {
  // Condition the world GPs on prior measurements (with sigma_w^2 noise).
  bool condition_world_on_prior = true;
  // Rollouts abort once any |x_i| exceeds this bound.
  double divergence_bound = 1e6;
};

struct OneStep {
  std::vector<double> next_state;
  std::vector<double> g_values;
};

// Draws g(x~) ~ N(mu(x~), sigma^2(x~)) per dimension from the world GPs and
// returns next = f(x~) + g + Sigma_w zeta_w. The caller conditions each world
// GP on (x~, g_values[i]) afterwards. probes, when given, receives the solves
// so that the append can reuse them.
OneStep one_step_sample(const std::vector<GpState>& world_gps,
                        const SystemSpec& system,
                        std::span<const double> augmented,
                        std::span<const double> zeta_f,
                        std::span<const double> zeta_w,
                        std::vector<GpState::Probe>* probes = nullptr);

// The predictive model: system description plus the prior-conditioned world
// GPs and initial learner dataset D_0, built once and copied into every
// rollout.
class WorldModel {
 public:
  WorldModel(SystemSpec system, MeasurementSet prior = {},
             WorldOptions options = {});

  const SystemSpec& system() const { return system_; }
  const WorldOptions& options() const { return options_; }
  const MeasurementSet& prior_data() const { return prior_; }
  const std::vector<GpState>& world_prior() const { return world_prior_; }
  const LearnerDataset& learner_prior() const { return learner_prior_; }

  // Samples one closed-loop trajectory. cost may be null (no stage costs
  // recorded). trajectory_index only labels divergence errors.
  Trajectory rollout(const ControlLaw& law, std::span<const double> theta,
                     const RolloutDraws::Slice& draws,
                     std::span<const double> x0, const StageCost* cost,
                     std::size_t trajectory_index = 0) const;

 private:
  SystemSpec system_;
  MeasurementSet prior_;
  WorldOptions options_;
  std::vector<GpState> world_prior_;
  LearnerDataset learner_prior_;
};

Trajectory rollout_sample(const WorldModel& model, const ControlLaw& law,
                          std::span<const double> theta,
                          const RolloutDraws::Slice& draws,
                          std::span<const double> x0,
                          const StageCost* cost = nullptr);

// Per-step empirical moments across trajectories; row-major (N + 1) x n_x.
// Variance uses the M - 1 denominator and is 0 for M = 1.
struct StateMoments {
  std::size_t state_dim = 0;
  std::vector<double> mean;
  std::vector<double> variance;
};

StateMoments expected_state_estimate(const WorldModel& model,
                                     const ControlLaw& law,
                                     std::span<const double> theta,
                                     const RolloutDraws& draws,
                                     std::span<const double> x0,
                                     int threads = 1);

}  // namespace antler

#endif  // ANTLER_WORLD_MODEL_HPP_
