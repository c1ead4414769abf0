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
#include "antler/control_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace antler {

bool ParamBox::contains(std::span<const double> theta) const {
  if (theta.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!(theta[i] >= lower[i] && theta[i] <= upper[i])) return false;
  }
  return true;
}

std::vector<double> ParamBox::project(std::span<const double> theta) const {
  if (theta.size() != dim()) {
    throw std::invalid_argument("ParamBox: parameter dimension mismatch");
  }
  std::vector<double> p(theta.begin(), theta.end());
  for (std::size_t i = 0; i < dim(); ++i) p[i] = std::clamp(p[i], lower[i], upper[i]);
  return p;
}

void ParamBox::validate() const {
  if (lower.size() != upper.size() || lower.empty()) {
    throw std::invalid_argument("ParamBox: lower and upper need equal, nonzero length");
  }
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || lower[i] > upper[i]) {
      throw std::invalid_argument("ParamBox: empty or non-finite interval at coordinate " +
                                  std::to_string(i));
    }
  }
}

double gp_mean_tracking_law(const LearnerDataset& data,
                            std::span<const double> theta, double x,
                            double x_ref) {
  const double query[2] = {x, 0.0};
  const double mu = data.posterior_mean(0, query);
  return -mu - theta[0] * (x - theta[1] * x_ref);
}

std::vector<double> linear_feedback_law(std::span<const double> theta,
                                        std::span<const double> x,
                                        std::size_t input_dim) {
  if (theta.size() != input_dim * x.size()) {
    throw std::invalid_argument("linear_feedback_law: gain has " +
                                std::to_string(theta.size()) +
                                " entries, expected " +
                                std::to_string(input_dim * x.size()));
  }
  std::vector<double> u(input_dim, 0.0);
  for (std::size_t r = 0; r < input_dim; ++r) {
    for (std::size_t c = 0; c < x.size(); ++c) u[r] -= theta[r * x.size() + c] * x[c];
  }
  return u;
}

GpMeanTrackingLaw::GpMeanTrackingLaw(std::shared_ptr<const Reference> reference,
                                     ParamBox box)
    : ControlLaw(std::move(box)), reference_(std::move(reference)) {
  if (!reference_) throw std::invalid_argument("gp_mean_tracking: reference required");
  this->box().validate();
  if (this->box().dim() != 2) {
    throw std::invalid_argument("gp_mean_tracking: parameter box must be 2-dimensional");
  }
}

std::string GpMeanTrackingLaw::description() const {
  return "u = -mu_t(x) - theta_1 (x - theta_2 x_ref_t)";
}

void GpMeanTrackingLaw::evaluate(const LearnerDataset& data,
                                 std::span<const double> theta,
                                 std::span<const double> x, std::size_t t,
                                 std::span<double> u) const {
  u[0] = gp_mean_tracking_law(data, theta, x[0], reference_->at(t));
}

LinearFeedbackLaw::LinearFeedbackLaw(std::size_t state_dim,
                                     std::size_t input_dim, ParamBox box)
    : ControlLaw(std::move(box)), state_dim_(state_dim), input_dim_(input_dim) {
  this->box().validate();
  if (this->box().dim() != state_dim * input_dim) {
    throw std::invalid_argument("linear_feedback: box needs state_dim * input_dim entries");
  }
}

std::string LinearFeedbackLaw::description() const {
  std::ostringstream s;
  s << "u = -Theta x, Theta " << input_dim_ << "x" << state_dim_;
  return s.str();
}

void LinearFeedbackLaw::evaluate(const LearnerDataset&,
                                 std::span<const double> theta,
                                 std::span<const double> x, std::size_t,
                                 std::span<double> u) const {
  const auto v = linear_feedback_law(theta, x, input_dim_);
  std::copy(v.begin(), v.end(), u.begin());
}

CounterpartLaw::CounterpartLaw(std::shared_ptr<const ControlLaw> inner,
                               std::shared_ptr<const LearnerDataset> frozen)
    : ControlLaw(inner->box()), inner_(std::move(inner)), frozen_(std::move(frozen)) {}

std::string CounterpartLaw::description() const {
  return inner_->description() + " with data frozen at D_0 (" +
         std::to_string(frozen_->size()) + " points)";
}

void CounterpartLaw::evaluate(const LearnerDataset&,
                              std::span<const double> theta,
                              std::span<const double> x, std::size_t t,
                              std::span<double> u) const {
  inner_->evaluate(*frozen_, theta, x, t, u);
}

std::shared_ptr<const ControlLaw> data_independent_counterpart(
    std::shared_ptr<const ControlLaw> law, LearnerDataset initial_data) {
  initial_data.set_shared_readonly();
  return std::make_shared<CounterpartLaw>(
      std::move(law), std::make_shared<const LearnerDataset>(std::move(initial_data)));
}

std::shared_ptr<const ControlLaw> make_control_law(const std::string& name,
                                                   const LawOptions& options) {
  if (name == "gp_mean_tracking") {
    return std::make_shared<GpMeanTrackingLaw>(options.reference, options.box);
  }
  if (name == "linear_feedback") {
    return std::make_shared<LinearFeedbackLaw>(options.state_dim,
                                               options.input_dim, options.box);
  }
  throw std::invalid_argument("unknown control law '" + name + "'");
}

std::vector<std::string> control_law_names() {
  return {"gp_mean_tracking", "linear_feedback"};
}

}  // namespace antler
