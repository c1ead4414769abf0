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
#ifndef ANTLER_HYPERPARAMETERS_HPP_
#define ANTLER_HYPERPARAMETERS_HPP_

#include <cstdint>

#include "antler/gp.hpp"
#include "antler/kernel.hpp"

namespace antler {

// Log marginal likelihood of zero-mean GP regression and its gradient with
// respect to log(signal_variance) and log(lengthscale).
struct LmlValue {
  double value = 0.0;
  double d_log_signal_variance = 0.0;
  double d_log_lengthscale = 0.0;
};

// -1/2 y^T A^{-1} y - 1/2 log det A - n/2 log(2 pi),
// A = K + (noise_variance + jitter) I. Throws NumericError when A is not
// positive definite and std::invalid_argument for empty data.
double log_marginal_likelihood(const KernelSpec& spec,
                               const RegressionData& data,
                               double noise_variance);

LmlValue log_marginal_likelihood_with_gradient(const KernelSpec& spec,
                                               const RegressionData& data,
                                               double noise_variance);

struct TrainingOptions {
  int restarts = 5;           // additional starts beyond the initial guess
  int max_iterations = 200;   // per start
  std::uint64_t seed = 0;
  double min_value = 1e-6;    // box on both hyperparameters
  double max_value = 1e6;
  double gradient_tolerance = 1e-6;
};

struct TrainingResult {
  KernelSpec spec;
  double log_likelihood = 0.0;
  double initial_log_likelihood = 0.0;
  bool converged = false;  // false: best-found point returned at the cap
  int iterations = 0;      // of the winning start
};

// Multi-start projected gradient ascent in log space. The returned
// likelihood is never below that of init.
TrainingResult train_hyperparameters(const RegressionData& data,
                                     double noise_variance,
                                     const KernelSpec& init,
                                     const TrainingOptions& options = {});

}  // namespace antler

#endif  // ANTLER_HYPERPARAMETERS_HPP_
