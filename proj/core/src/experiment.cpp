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
#include "antler/experiment.hpp"

#include <utility>

#include "antler/errors.hpp"
#include "antler/prior_data.hpp"

namespace antler {
namespace {

DynamicsFn prior_model_from(const ExperimentConfig::System& s) {
  return make_dynamics(s.dynamics, s.state_dim, s.input_dim, s.dynamics_a, s.dynamics_b);
}

std::shared_ptr<const Reference> reference_from(const ExperimentConfig& c) {
  const auto& l = c.law;
  const auto n = c.system.horizon;
  if (l.reference == "sinusoid") {
    return std::make_shared<Reference>(Reference::sinusoid(
        n, l.reference_offset, l.reference_amplitude, l.reference_period, l.reference_phase));
  }
  if (l.reference == "constant") {
    return std::make_shared<Reference>(Reference::constant(n, l.reference_value));
  }
  return std::make_shared<Reference>(Reference::constant(n, 0.0));
}

}  // namespace

TrueSystemSpec true_system_from(const ExperimentConfig& c) {
  TrueSystemSpec t;
  t.state_dim = c.system.state_dim;
  t.input_dim = c.system.input_dim;
  t.prior_model = prior_model_from(c.system);
  t.true_g = make_true_g(c.evaluation.true_g, c.evaluation.true_g_params);
  t.process_noise_std = c.system.process_noise_std;
  t.horizon = c.system.horizon;
  t.divergence_bound = c.system.divergence_bound;
  return t;
}

Experiment build_experiment(ExperimentConfig config) {
  Experiment e;
  e.hash = config_hash(config);
  e.config = std::move(config);
  const auto& c = e.config;

  e.system.state_dim = c.system.state_dim;
  e.system.input_dim = c.system.input_dim;
  e.system.prior_model = prior_model_from(c.system);
  e.system.process_noise_std = c.system.process_noise_std;
  e.system.horizon = c.system.horizon;
  e.true_system = true_system_from(c);

  e.prior.state_dim = c.system.state_dim;
  e.prior.input_dim = c.system.input_dim;
  if (!c.prior_data.path.empty()) {
    e.prior = ingest_prior_data(c.prior_data.path, c.system.state_dim, c.system.input_dim,
                                parse_target_kind(c.prior_data.targets), e.system.prior_model);
  }

  KernelSpec base;
  base.signal_variance = c.kernel.signal_variance;
  base.lengthscale = c.kernel.lengthscale;
  base.projection = c.kernel.projection == "state_only" ? InputProjection::kStateOnly
                                                        : InputProjection::kAll;
  base.state_dim = c.system.state_dim;
  if (c.kernel.train) {
    if (e.prior.size() < 2) throw ConfigError("kernel training needs at least 2 prior points");
    TrainingOptions opts;
    opts.restarts = c.kernel.restarts;
    opts.max_iterations = c.kernel.max_iterations;
    for (std::size_t i = 0; i < c.system.state_dim; ++i) {
      opts.seed = c.kernel.seed + i;
      const double sw = c.system.process_noise_std[i];
      e.training.push_back(train_hyperparameters(e.prior.column(i), sw * sw, base, opts));
      e.system.kernels.push_back(e.training.back().spec);
    }
  } else {
    e.system.kernels = {base};
  }
  e.system.validate();

  WorldOptions wo;
  wo.condition_world_on_prior = c.prior_data.condition_world;
  wo.divergence_bound = c.system.divergence_bound;
  e.model = std::make_shared<WorldModel>(e.system, e.prior, wo);

  e.reference = reference_from(c);
  if (c.cost.kind == "tracking") {
    e.cost = std::make_shared<TrackingCost>(e.reference);
  } else if (c.cost.kind == "quadratic") {
    e.cost = std::make_shared<QuadraticCost>(c.cost.state_weight, c.cost.input_weight);
  } else {
    e.cost = std::make_shared<ZeroCost>();
  }

  LawOptions lo;
  lo.box = ParamBox{c.law.lower, c.law.upper};
  lo.reference = e.reference;
  lo.state_dim = c.system.state_dim;
  lo.input_dim = c.system.input_dim;
  e.law = make_control_law(c.law.name, lo);
  e.counterpart = data_independent_counterpart(e.law, e.model->learner_prior());
  return e;
}

SaaProblem Experiment::problem(std::size_t samples, bool anticipate) const {
  SaaProblem p;
  p.model = model;
  p.law = law_for(anticipate);
  p.cost = cost;
  p.x0 = config.system.x0;
  p.draws = RolloutDraws::generate(samples, system.horizon, system.state_dim,
                                   config.saa.draw_seed);
  p.threads = config.saa.threads;
  return p;
}

OptimizerOptions Experiment::optimizer_options() const {
  OptimizerOptions o;
  o.n_starts = config.saa.n_starts;
  o.seed = config.saa.start_seed;
  o.max_iterations = config.saa.max_iterations;
  o.theta_tolerance = config.saa.theta_tolerance;
  o.cost_tolerance = config.saa.cost_tolerance;
  return o;
}

EvaluationSetup Experiment::evaluation_setup() const {
  return EvaluationSetup{true_system, model->learner_prior(), config.system.x0, cost, reference};
}

nlohmann::json Experiment::kernels_json() const {
  auto out = nlohmann::json::array();
  for (std::size_t i = 0; i < system.state_dim; ++i) {
    const auto& k = system.kernel(i);
    nlohmann::json j = {{"dim", i},
                        {"signal_variance", k.signal_variance},
                        {"lengthscale", k.lengthscale},
                        {"projection", k.projection == InputProjection::kStateOnly
                                           ? "state_only" : "all"}};
    if (i < training.size()) {
      j["log_likelihood"] = training[i].log_likelihood;
      j["initial_log_likelihood"] = training[i].initial_log_likelihood;
      j["converged"] = training[i].converged;
      j["iterations"] = training[i].iterations;
    }
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace antler
