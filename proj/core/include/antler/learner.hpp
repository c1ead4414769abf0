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
#ifndef ANTLER_LEARNER_HPP_
#define ANTLER_LEARNER_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "antler/gp.hpp"
#include "antler/system.hpp"

namespace antler {

// The measurement set D_t a learning-based control law sees, with one
// conditioned GP per state dimension (noise variance sigma_w_i^2).
//
// Posterior-mean queries cache their forward solve; an append at the same
// projected input (the usual query-then-measure pattern) reuses it.
// Not safe for concurrent use: each rollout owns its own copy.
class LearnerDataset {
 public:
  LearnerDataset() = default;
  LearnerDataset(const SystemSpec& system);
  LearnerDataset(std::vector<KernelSpec> kernels, std::size_t state_dim,
                 std::size_t input_dim, std::vector<double> noise_variance);

  static LearnerDataset from_measurements(const SystemSpec& system,
                                          const MeasurementSet& data);

  std::size_t size() const { return gps_.empty() ? 0 : gps_.front().size(); }
  std::size_t state_dim() const { return state_dim_; }
  std::size_t input_dim() const { return input_dim_; }
  const GpState& gp(std::size_t dim) const { return gps_.at(dim); }

  double posterior_mean(std::size_t dim, std::span<const double> query) const;
  PosteriorQuery posterior(std::size_t dim, std::span<const double> query) const;

  // Disables the probe cache, making const queries free of hidden state so
  // that one instance can be shared across threads.
  void set_shared_readonly() { cache_enabled_ = false; }

  // Adds one transition: augmented input and per-dimension targets
  // x_next - f(x, u).
  void append(std::span<const double> input, std::span<const double> targets);

 private:
  const GpState::Probe& cached_probe(std::size_t dim,
                                     std::span<const double> query) const;

  std::size_t state_dim_ = 0;
  std::size_t input_dim_ = 0;
  std::vector<GpState> gps_;
  mutable std::vector<GpState::Probe> probes_;
  mutable std::vector<std::vector<double>> probe_queries_;
  mutable std::vector<bool> probe_valid_;
  bool cache_enabled_ = true;
};

}  // namespace antler

#endif  // ANTLER_LEARNER_HPP_
