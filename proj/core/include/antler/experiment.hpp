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
#ifndef ANTLER_EXPERIMENT_HPP_
#define ANTLER_EXPERIMENT_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "antler/config.hpp"
#include "antler/evaluation.hpp"
#include "antler/hyperparameters.hpp"
#include "antler/saa.hpp"
#include "antler/world_model.hpp"

namespace antler {

// Everything a config describes, built and ready to run.
struct Experiment {
  ExperimentConfig config;
  std::string hash;
  SystemSpec system;
  TrueSystemSpec true_system;
  MeasurementSet prior;
  std::vector<TrainingResult> training;  // one per state dim when trained
  std::shared_ptr<const WorldModel> model;
  std::shared_ptr<const Reference> reference;
  std::shared_ptr<const StageCost> cost;
  std::shared_ptr<const ControlLaw> law;
  std::shared_ptr<const ControlLaw> counterpart;

  // Learning law when anticipate is set, counterpart otherwise.
  std::shared_ptr<const ControlLaw> law_for(bool anticipate) const {
    return anticipate ? law : counterpart;
  }
  SaaProblem problem(std::size_t samples, bool anticipate) const;
  OptimizerOptions optimizer_options() const;
  EvaluationSetup evaluation_setup() const;
  nlohmann::json kernels_json() const;
};

// Reads prior data and trains kernels as configured.
Experiment build_experiment(ExperimentConfig config);

TrueSystemSpec true_system_from(const ExperimentConfig& config);

}  // namespace antler

#endif  // ANTLER_EXPERIMENT_HPP_
