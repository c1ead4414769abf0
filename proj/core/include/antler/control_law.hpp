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
#ifndef ANTLER_CONTROL_LAW_HPP_
#define ANTLER_CONTROL_LAW_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "antler/cost.hpp"
#include "antler/learner.hpp"

namespace antler {

// Closed box of admissible parameters.
struct ParamBox {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const { return lower.size(); }
  bool contains(std::span<const double> theta) const;
  std::vector<double> project(std::span<const double> theta) const;
  void validate() const;
};

// A parametric control law u(D_t, theta, x_t). evaluate() must be a
// deterministic function of its arguments.
class ControlLaw {
 public:
  explicit ControlLaw(ParamBox box) : box_(std::move(box)) {}
  virtual ~ControlLaw() = default;

  virtual std::string name() const = 0;
  virtual std::string description() const = 0;
  virtual std::size_t param_dim() const = 0;
  virtual std::size_t state_dim() const = 0;
  virtual std::size_t input_dim() const = 0;
  // False when the output does not depend on the dataset argument, which
  // lets rollouts skip learner updates.
  virtual bool uses_data() const { return true; }

  virtual void evaluate(const LearnerDataset& data,
                        std::span<const double> theta,
                        std::span<const double> x, std::size_t t,
                        std::span<double> u) const = 0;

  const ParamBox& box() const { return box_; }

 private:
  ParamBox box_;
};

// u = -mu_t(x) - theta_1 (x - theta_2 x_ref_t), scalar state and input.
// mu_t is the learner posterior mean queried at (x, 0).
double gp_mean_tracking_law(const LearnerDataset& data,
                            std::span<const double> theta, double x,
                            double x_ref);

// u = -Theta x with Theta an input_dim x state_dim row-major matrix.
std::vector<double> linear_feedback_law(std::span<const double> theta,
                                        std::span<const double> x,
                                        std::size_t input_dim);

class GpMeanTrackingLaw final : public ControlLaw {
 public:
  GpMeanTrackingLaw(std::shared_ptr<const Reference> reference, ParamBox box);
  std::string name() const override { return "gp_mean_tracking"; }
  std::string description() const override;
  std::size_t param_dim() const override { return 2; }
  std::size_t state_dim() const override { return 1; }
  std::size_t input_dim() const override { return 1; }
  void evaluate(const LearnerDataset& data, std::span<const double> theta,
                std::span<const double> x, std::size_t t,
                std::span<double> u) const override;
  const Reference& reference() const { return *reference_; }

 private:
  std::shared_ptr<const Reference> reference_;
};

class LinearFeedbackLaw final : public ControlLaw {
 public:
  LinearFeedbackLaw(std::size_t state_dim, std::size_t input_dim, ParamBox box);
  std::string name() const override { return "linear_feedback"; }
  std::string description() const override;
  std::size_t param_dim() const override { return state_dim_ * input_dim_; }
  std::size_t state_dim() const override { return state_dim_; }
  std::size_t input_dim() const override { return input_dim_; }
  bool uses_data() const override { return false; }
  void evaluate(const LearnerDataset& data, std::span<const double> theta,
                std::span<const double> x, std::size_t t,
                std::span<double> u) const override;

 private:
  std::size_t state_dim_;
  std::size_t input_dim_;
};

// The law evaluated with its dataset frozen at D_0.
class CounterpartLaw final : public ControlLaw {
 public:
  CounterpartLaw(std::shared_ptr<const ControlLaw> inner,
                 std::shared_ptr<const LearnerDataset> frozen);
  std::string name() const override { return inner_->name() + "/counterpart"; }
  std::string description() const override;
  std::size_t param_dim() const override { return inner_->param_dim(); }
  std::size_t state_dim() const override { return inner_->state_dim(); }
  std::size_t input_dim() const override { return inner_->input_dim(); }
  bool uses_data() const override { return false; }
  void evaluate(const LearnerDataset& data, std::span<const double> theta,
                std::span<const double> x, std::size_t t,
                std::span<double> u) const override;

 private:
  std::shared_ptr<const ControlLaw> inner_;
  std::shared_ptr<const LearnerDataset> frozen_;
};

std::shared_ptr<const ControlLaw> data_independent_counterpart(
    std::shared_ptr<const ControlLaw> law, LearnerDataset initial_data);

struct LawOptions {
  ParamBox box;
  std::shared_ptr<const Reference> reference;  // gp_mean_tracking only
  std::size_t state_dim = 1;
  std::size_t input_dim = 1;
};

// Catalog lookup: "gp_mean_tracking" or "linear_feedback".
std::shared_ptr<const ControlLaw> make_control_law(const std::string& name,
                                                   const LawOptions& options);
std::vector<std::string> control_law_names();

}  // namespace antler

#endif  // ANTLER_CONTROL_LAW_HPP_
