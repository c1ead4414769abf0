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
#ifndef ANTLER_GP_HPP_
#define ANTLER_GP_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "antler/kernel.hpp"

namespace antler {

// Inputs (row-major, one augmented state per row) with one scalar target
// per row.
struct RegressionData {
  std::size_t input_dim = 0;
  std::vector<double> inputs;
  std::vector<double> targets;

  std::size_t size() const { return targets.size(); }
  std::span<const double> input(std::size_t i) const {
    return {inputs.data() + i * input_dim, input_dim};
  }
  void push_back(std::span<const double> input, double target);
};

struct PosteriorQuery {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact zero-mean GP regression for one output dimension.
//
// The Cholesky factor L of (K + diag(noise) + jitter * I) is stored as packed
// lower-triangular rows so that conditioning on one more point appends a row
// in O(n^2). The whitened targets L^{-1} y are kept alongside, which makes
// the posterior mean a single dot product after one forward solve.
//
// Each stored point carries its own noise variance: the world model
// conditions noisy prior measurements and noiseless function samples in the
// same factor.
class GpState {
 public:
  // A forward solve of k(query) against the current factor. Reusable for
  // both a posterior evaluation and an append at the same input.
  struct Probe {
    std::vector<double> projected;
    std::vector<double> solved;  // L^{-1} k(query)
    double prior_variance = 0.0;
    std::size_t factor_size = 0;
    // Latest stored noiseless point with the same projected input, or -1.
    std::ptrdiff_t revisit = -1;
  };

  GpState() = default;
  GpState(KernelSpec spec, std::size_t input_dim, double noise_variance = 0.0);

  // Conditions on every row of data, in order.
  static GpState from_data(KernelSpec spec, const RegressionData& data,
                           double noise_variance);

  const KernelSpec& kernel() const { return spec_; }
  std::size_t size() const { return targets_.size(); }
  bool empty() const { return targets_.empty(); }
  std::size_t input_dim() const { return input_dim_; }
  double noise_variance() const { return noise_variance_; }

  std::span<const double> input(std::size_t i) const {
    return {inputs_.data() + i * input_dim_, input_dim_};
  }
  std::span<const double> targets() const { return targets_; }
  std::span<const double> point_noise() const { return noise_; }

  Probe probe(std::span<const double> query) const;
  // Same as probe() but reuses the buffers held by out.
  void probe_into(std::span<const double> query, Probe& out) const;

  PosteriorQuery posterior(std::span<const double> query) const;
  PosteriorQuery posterior(const Probe& probe) const;

  // Condition on (input, target) with the state's default noise variance or
  // an explicit one. Throws NumericError if the new pivot is not positive.
  void append(std::span<const double> input, double target);
  void append(std::span<const double> input, double target,
              double noise_variance);
  // Append reusing a probe computed on this state at the same input.
  void append(const Probe& probe, std::span<const double> input, double target,
              double noise_variance);

  // Dense row-major copy of the Cholesky factor (size() x size()). Empty for
  // the degenerate kernel.
  std::vector<double> cholesky_dense() const;

  nlohmann::json to_json() const;

 private:
  void refresh_refinement();

  KernelSpec spec_;
  std::size_t input_dim_ = 0;
  std::size_t projected_dim_ = 0;
  double noise_variance_ = 0.0;

  std::vector<double> inputs_;
  std::vector<double> projected_;
  std::vector<double> targets_;
  std::vector<double> noise_;
  std::vector<double> chol_;
  std::vector<double> whitened_;
  // L^{-1} L^{-T} whitened_; one refinement step of the mean weights
  // against the unjittered Gram matrix.
  std::vector<double> refined_;
};

// k(query, inputs[i]) for every stored input.
std::vector<double> kernel_vector(const GpState& gp,
                                  std::span<const double> query);

PosteriorQuery posterior(const GpState& gp, std::span<const double> query);

// Value-semantics conditioning; pass an rvalue to reuse the storage.
GpState condition_append(GpState gp, std::span<const double> input,
                         double target);

}  // namespace antler

#endif  // ANTLER_GP_HPP_
