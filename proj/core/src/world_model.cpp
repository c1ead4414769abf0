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
#include "antler/world_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "antler/errors.hpp"
#include "antler/parallel.hpp"

namespace antler {

OneStep one_step_sample(const std::vector<GpState>& world_gps,
                        const SystemSpec& system,
                        std::span<const double> augmented,
                        std::span<const double> zeta_f,
                        std::span<const double> zeta_w,
                        std::vector<GpState::Probe>* probes) {
  const std::size_t nx = system.state_dim;
  if (world_gps.size() != nx || zeta_f.size() != nx || zeta_w.size() != nx ||
      augmented.size() != system.augmented_dim()) {
    throw std::invalid_argument("one_step_sample: dimension mismatch");
  }
  OneStep out;
  out.next_state.resize(nx);
  out.g_values.resize(nx);
  system.prior_model(augmented.first(nx), augmented.subspan(nx), out.next_state);
  GpState::Probe local;
  if (probes != nullptr) probes->resize(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    GpState::Probe& p = probes != nullptr ? (*probes)[i] : local;
    world_gps[i].probe_into(augmented, p);
    const PosteriorQuery q = world_gps[i].posterior(p);
    out.g_values[i] = q.mean + std::sqrt(q.variance) * zeta_f[i];
    out.next_state[i] += out.g_values[i] + system.process_noise_std[i] * zeta_w[i];
  }
  return out;
}

WorldModel::WorldModel(SystemSpec system, MeasurementSet prior,
                       WorldOptions options)
    : system_(std::move(system)), prior_(std::move(prior)), options_(options) {
  system_.validate();
  if (prior_.size() > 0 && (prior_.state_dim != system_.state_dim ||
                            prior_.input_dim != system_.input_dim)) {
    throw std::invalid_argument("WorldModel: prior data dimensions do not match the system");
  }
  for (std::size_t i = 0; i < system_.state_dim; ++i) {
    GpState gp(system_.kernel(i), system_.augmented_dim(), 0.0);
    if (options_.condition_world_on_prior) {
      const double noise = system_.process_noise_std[i] * system_.process_noise_std[i];
      for (std::size_t r = 0; r < prior_.size(); ++r) {
        gp.append(prior_.input(r), prior_.target(r)[i], noise);
      }
    }
    world_prior_.push_back(std::move(gp));
  }
  learner_prior_ = LearnerDataset::from_measurements(system_, prior_);
}

Trajectory WorldModel::rollout(const ControlLaw& law,
                               std::span<const double> theta,
                               const RolloutDraws::Slice& draws,
                               std::span<const double> x0,
                               const StageCost* cost,
                               std::size_t trajectory_index) const {
  const std::size_t nx = system_.state_dim;
  const std::size_t nu = system_.input_dim;
  const std::size_t horizon = system_.horizon;
  if (draws.steps() < horizon || draws.state_dim() != nx) {
    throw std::invalid_argument("rollout: draw slice shape does not match the system");
  }
  if (x0.size() != nx || law.state_dim() != nx || law.input_dim() != nu) {
    throw std::invalid_argument("rollout: law or initial state dimension mismatch");
  }
  if (theta.size() != law.param_dim()) {
    throw std::invalid_argument("rollout: parameter dimension mismatch");
  }

  Trajectory traj;
  traj.state_dim = nx;
  traj.input_dim = nu;
  traj.states.reserve((horizon + 1) * nx);
  traj.inputs.reserve(horizon * nu);
  traj.g_samples.reserve(horizon * nx);
  traj.states.assign(x0.begin(), x0.end());

  std::vector<GpState> world = world_prior_;
  LearnerDataset learner = learner_prior_;
  std::vector<GpState::Probe> probes;
  std::vector<double> aug(nx + nu), zf(nx), zw(nx), prior_next(nx), targets(nx);

  for (std::size_t t = 0; t < horizon; ++t) {
    std::copy_n(traj.states.begin() + static_cast<std::ptrdiff_t>(t * nx), nx, aug.begin());
    law.evaluate(learner, theta, std::span<const double>(aug.data(), nx), t,
                 std::span<double>(aug.data() + nx, nu));
    for (std::size_t i = 0; i < nx; ++i) {
      zf[i] = draws.function_sample(t, i);
      zw[i] = draws.process_noise(t, i);
    }
    OneStep step = one_step_sample(world, system_, aug, zf, zw, &probes);
    for (std::size_t i = 0; i < nx; ++i) {
      world[i].append(probes[i], aug, step.g_values[i], 0.0);
    }
    for (std::size_t i = 0; i < nx; ++i) {
      const double v = step.next_state[i];
      if (!std::isfinite(v) || std::abs(v) > options_.divergence_bound) {
        std::ostringstream msg;
        msg << "rollout diverged: trajectory " << trajectory_index << ", step "
            << t << ", state[" << i << "] = " << v;
        throw DivergenceError(msg.str(), trajectory_index, t);
      }
    }
    if (law.uses_data()) {
      system_.prior_model(std::span<const double>(aug.data(), nx),
                          std::span<const double>(aug.data() + nx, nu), prior_next);
      for (std::size_t i = 0; i < nx; ++i) targets[i] = step.next_state[i] - prior_next[i];
      learner.append(aug, targets);
    }
    traj.inputs.insert(traj.inputs.end(), aug.begin() + static_cast<std::ptrdiff_t>(nx), aug.end());
    traj.g_samples.insert(traj.g_samples.end(), step.g_values.begin(), step.g_values.end());
    traj.states.insert(traj.states.end(), step.next_state.begin(), step.next_state.end());
  }
  traj.terminal_input.resize(nu);
  law.evaluate(learner, theta, traj.state(horizon), horizon, traj.terminal_input);

  if (cost != nullptr) {
    traj.stage_costs.resize(horizon + 1);
    for (std::size_t t = 0; t < horizon; ++t) {
      traj.stage_costs[t] = (*cost)(t, traj.state(t), traj.input(t));
    }
    traj.stage_costs[horizon] = (*cost)(horizon, traj.state(horizon), traj.terminal_input);
  }
  return traj;
}

Trajectory rollout_sample(const WorldModel& model, const ControlLaw& law,
                          std::span<const double> theta,
                          const RolloutDraws::Slice& draws,
                          std::span<const double> x0, const StageCost* cost) {
  return model.rollout(law, theta, draws, x0, cost);
}

StateMoments expected_state_estimate(const WorldModel& model,
                                     const ControlLaw& law,
                                     std::span<const double> theta,
                                     const RolloutDraws& draws,
                                     std::span<const double> x0, int threads) {
  const std::size_t m_count = draws.trajectories();
  if (m_count == 0) throw std::invalid_argument("expected_state_estimate: need M >= 1");
  const std::size_t nx = model.system().state_dim;
  const std::size_t rows = (model.system().horizon + 1) * nx;
  std::vector<std::vector<double>> states(m_count);
  parallel_for(m_count, threads, [&](std::size_t m) {
    states[m] = model.rollout(law, theta, draws.trajectory(m), x0, nullptr, m).states;
  });
  StateMoments out;
  out.state_dim = nx;
  out.mean.assign(rows, 0.0);
  out.variance.assign(rows, 0.0);
  std::vector<double> column(m_count);
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t m = 0; m < m_count; ++m) column[m] = states[m][k];
    const double mean = pairwise_sum(column) / static_cast<double>(m_count);
    out.mean[k] = mean;
    if (m_count > 1) {
      for (double& v : column) v = (v - mean) * (v - mean);
      out.variance[k] = pairwise_sum(column) / static_cast<double>(m_count - 1);
    }
  }
  return out;
}

}  // namespace antler
