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
#ifndef ANTLER_CONFIG_HPP_
#define ANTLER_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace antler {

inline constexpr int kConfigSchemaVersion = 1;

// Experiment description. Loaded from YAML (JSON is accepted too, being a
// YAML subset); see configs/ for annotated examples.
struct ExperimentConfig {
  struct System {
    std::string dynamics = "integrator";
    double dynamics_a = 1.0;  // "linear" dynamics only
    double dynamics_b = 1.0;
    std::size_t state_dim = 1;
    std::size_t input_dim = 1;
    std::vector<double> process_noise_std{0.0};
    std::size_t horizon = 1;
    std::vector<double> x0{0.0};
    double divergence_bound = 1e6;
  } system;

  struct Kernel {
    bool train = false;
    double signal_variance = 1.0;  // fixed value, or training start
    double lengthscale = 1.0;
    std::string projection = "all";  // "all" | "state_only"
    int restarts = 5;
    int max_iterations = 200;
    std::uint64_t seed = 0;
  } kernel;

  struct PriorData {
    std::string path;  // absolute after loading; empty = no prior data
    std::string targets = "increment";
    bool condition_world = true;
    // Regulator used by the generate-prior command.
    bool has_generator = false;
    std::size_t generate_count = 100;
    double generate_gain = 1.0;
    double generate_dither = 0.0;
    std::uint64_t generate_seed = 0;
  } prior_data;

  struct Law {
    std::string name = "gp_mean_tracking";
    std::vector<double> lower;
    std::vector<double> upper;
    std::string reference = "zero";  // "zero" | "constant" | "sinusoid"
    double reference_value = 0.0;
    double reference_offset = 0.0;
    double reference_amplitude = 0.0;
    double reference_period = 1.0;
    double reference_phase = 0.0;
  } law;

  struct Cost {
    std::string kind = "tracking";  // "tracking" | "quadratic" | "zero"
    double state_weight = 1.0;
    double input_weight = 0.0;
  } cost;

  struct Saa {
    std::size_t samples = 1;
    std::vector<std::size_t> sample_counts;
    int n_starts = 8;
    std::uint64_t draw_seed = 0;
    std::uint64_t start_seed = 0;
    int max_iterations = 100;
    double theta_tolerance = 1e-5;
    double cost_tolerance = 1e-8;
    bool anticipate = true;
    int threads = 1;
  } saa;

  struct Evaluation {
    std::string true_g = "zero";
    std::vector<double> true_g_params;
    std::size_t n_runs = 100;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> theta;
  } evaluation;

  // Canonical form with every default filled in. Keys come out sorted, so
  // dump() is stable and feeds config_hash().
  nlohmann::json to_json() const;
};

// Parses and validates. Throws ConfigError with the 1-based line of the
// offending node when one is known. Relative prior-data paths resolve
// against the directory holding the config file.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text,
                              const std::string& base_dir = ".");

// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace antler

#endif  // ANTLER_CONFIG_HPP_
