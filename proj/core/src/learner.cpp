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
#include "antler/learner.hpp"

#include <algorithm>
#include <stdexcept>

namespace antler {

LearnerDataset::LearnerDataset(const SystemSpec& system) {
  std::vector<KernelSpec> kernels;
  std::vector<double> noise;
  for (std::size_t i = 0; i < system.state_dim; ++i) {
    kernels.push_back(system.kernel(i));
    noise.push_back(system.process_noise_std[i] * system.process_noise_std[i]);
  }
  *this = LearnerDataset(std::move(kernels), system.state_dim, system.input_dim,
                         std::move(noise));
}

LearnerDataset::LearnerDataset(std::vector<KernelSpec> kernels,
                               std::size_t state_dim, std::size_t input_dim,
                               std::vector<double> noise_variance)
    : state_dim_(state_dim), input_dim_(input_dim) {
  if (kernels.size() != state_dim || noise_variance.size() != state_dim) {
    throw std::invalid_argument("LearnerDataset: need one kernel and noise per dimension");
  }
  for (std::size_t i = 0; i < state_dim; ++i) {
    gps_.emplace_back(kernels[i], state_dim + input_dim, noise_variance[i]);
  }
  probes_.resize(state_dim);
  probe_queries_.resize(state_dim);
  probe_valid_.assign(state_dim, false);
}

LearnerDataset LearnerDataset::from_measurements(const SystemSpec& system,
                                                 const MeasurementSet& data) {
  LearnerDataset d(system);
  if (data.size() > 0 &&
      (data.state_dim != system.state_dim || data.input_dim != system.input_dim)) {
    throw std::invalid_argument("LearnerDataset: measurement dimensions do not match the system");
  }
  for (std::size_t i = 0; i < data.size(); ++i) d.append(data.input(i), data.target(i));
  return d;
}

const GpState::Probe& LearnerDataset::cached_probe(
    std::size_t dim, std::span<const double> query) const {
  const GpState& gp = gps_.at(dim);
  GpState::Probe& p = probes_[dim];
  auto& q = probe_queries_[dim];
  const bool hit = probe_valid_[dim] && p.factor_size == gp.size() &&
                   std::equal(q.begin(), q.end(), query.begin(), query.end());
  if (!hit) {
    gp.probe_into(query, p);
    q.assign(query.begin(), query.end());
    probe_valid_[dim] = true;
  }
  return p;
}

double LearnerDataset::posterior_mean(std::size_t dim,
                                      std::span<const double> query) const {
  if (!cache_enabled_) return gps_.at(dim).posterior(query).mean;
  return gps_.at(dim).posterior(cached_probe(dim, query)).mean;
}

PosteriorQuery LearnerDataset::posterior(std::size_t dim,
                                         std::span<const double> query) const {
  if (!cache_enabled_) return gps_.at(dim).posterior(query);
  return gps_.at(dim).posterior(cached_probe(dim, query));
}

void LearnerDataset::append(std::span<const double> input,
                            std::span<const double> targets) {
  if (targets.size() != state_dim_) {
    throw std::invalid_argument("LearnerDataset: one target per state dimension");
  }
  for (std::size_t i = 0; i < state_dim_; ++i) {
    GpState& gp = gps_[i];
    const GpState::Probe* reuse = nullptr;
    if (probe_valid_[i] && probes_[i].factor_size == gp.size()) {
      // The cached query may differ from input only in coordinates the
      // kernel does not read.
      std::vector<double> proj(probes_[i].projected.size());
      project_input(gp.kernel(), input, proj);
      if (proj == probes_[i].projected) reuse = &probes_[i];
    }
    if (reuse != nullptr) {
      gp.append(*reuse, input, targets[i], gp.noise_variance());
    } else {
      gp.append(input, targets[i]);
    }
    probe_valid_[i] = false;
  }
}

}  // namespace antler
