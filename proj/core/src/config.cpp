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
#include "antler/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "antler/errors.hpp"

namespace antler {
namespace {

int line_of(const YAML::Node& n) {
  const auto m = n.Mark();
  return m.line >= 0 ? m.line + 1 : 0;
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) {
  throw ConfigError(what, line_of(n));
}

// Rejects unknown keys so typos do not silently fall back to defaults.
void check_keys(const YAML::Node& map, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!map.IsMap()) fail(map, where + ": expected a mapping");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) fail(kv.first, where + ": unknown key \"" + key + "\"");
  }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) fail(n, what + ": expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, what + ": cannot parse \"" + n.Scalar() + "\"");
  }
}

template <class T>
void opt(const YAML::Node& map, const char* key, const std::string& where, T& out) {
  if (const auto n = map[key]) out = scalar<T>(n, where + "." + key);
}

template <class T>
void req(const YAML::Node& map, const char* key, const std::string& where, T& out) {
  const auto n = map[key];
  if (!n) fail(map, where + ": missing required key \"" + key + "\"");
  out = scalar<T>(n, where + "." + key);
}

template <class T>
std::vector<T> seq(const YAML::Node& n, const std::string& what) {
  if (n.IsScalar()) return {scalar<T>(n, what)};
  if (!n.IsSequence()) fail(n, what + ": expected a list");
  std::vector<T> out;
  for (const auto& e : n) out.push_back(scalar<T>(e, what));
  return out;
}

void require(bool ok, const YAML::Node& n, const std::string& what) {
  if (!ok) fail(n, what);
}

void parse_system(const YAML::Node& n, ExperimentConfig::System& s) {
  const std::string w = "system";
  check_keys(n, w, {"dynamics", "a", "b", "state_dim", "input_dim",
                    "process_noise_std", "horizon", "x0", "divergence_bound"});
  opt(n, "dynamics", w, s.dynamics);
  require(s.dynamics == "zero" || s.dynamics == "integrator" || s.dynamics == "linear",
          n["dynamics"] ? n["dynamics"] : n,
          "system.dynamics must be zero, integrator or linear");
  opt(n, "a", w, s.dynamics_a);
  opt(n, "b", w, s.dynamics_b);
  opt(n, "state_dim", w, s.state_dim);
  opt(n, "input_dim", w, s.input_dim);
  require(s.state_dim > 0 && s.input_dim > 0, n, "system: dimensions must be positive");
  req(n, "horizon", w, s.horizon);
  require(s.horizon > 0, n["horizon"], "system.horizon must be positive");
  if (const auto p = n["process_noise_std"]) {
    s.process_noise_std = seq<double>(p, "system.process_noise_std");
    if (s.process_noise_std.size() == 1 && s.state_dim > 1) {
      s.process_noise_std.assign(s.state_dim, s.process_noise_std[0]);
    }
    require(s.process_noise_std.size() == s.state_dim, p,
            "system.process_noise_std: need one entry per state");
    for (double v : s.process_noise_std) require(v >= 0, p, "system.process_noise_std must be >= 0");
  } else {
    s.process_noise_std.assign(s.state_dim, 0.0);
  }
  if (const auto x = n["x0"]) {
    s.x0 = seq<double>(x, "system.x0");
    require(s.x0.size() == s.state_dim, x, "system.x0: need one entry per state");
  } else {
    s.x0.assign(s.state_dim, 0.0);
  }
  opt(n, "divergence_bound", w, s.divergence_bound);
  require(s.divergence_bound > 0, n, "system.divergence_bound must be positive");
}

void parse_kernel(const YAML::Node& n, ExperimentConfig::Kernel& k) {
  const std::string w = "kernel";
  check_keys(n, w, {"mode", "signal_variance", "lengthscale", "projection", "restarts",
                    "max_iterations", "seed"});
  std::string mode = "fixed";
  opt(n, "mode", w, mode);
  require(mode == "fixed" || mode == "train", n["mode"] ? n["mode"] : n,
          "kernel.mode must be fixed or train");
  k.train = mode == "train";
  opt(n, "signal_variance", w, k.signal_variance);
  opt(n, "lengthscale", w, k.lengthscale);
  require(k.signal_variance >= 0, n["signal_variance"] ? n["signal_variance"] : n,
          "kernel.signal_variance must be >= 0");
  require(k.lengthscale > 0, n["lengthscale"] ? n["lengthscale"] : n,
          "kernel.lengthscale must be positive");
  require(!k.train || k.signal_variance > 0, n,
          "kernel.signal_variance must be positive when training");
  opt(n, "projection", w, k.projection);
  require(k.projection == "all" || k.projection == "state_only",
          n["projection"] ? n["projection"] : n, "kernel.projection must be all or state_only");
  opt(n, "restarts", w, k.restarts);
  opt(n, "max_iterations", w, k.max_iterations);
  require(k.restarts >= 0 && k.max_iterations > 0, n, "kernel: bad training budget");
  opt(n, "seed", w, k.seed);
}

void parse_prior(const YAML::Node& n, ExperimentConfig::PriorData& p,
                 const std::filesystem::path& base) {
  const std::string w = "prior_data";
  check_keys(n, w, {"path", "targets", "condition_world", "generate"});
  opt(n, "path", w, p.path);
  if (!p.path.empty()) {
    std::filesystem::path path(p.path);
    if (path.is_relative()) path = base / path;
    p.path = std::filesystem::weakly_canonical(path).string();
  }
  opt(n, "targets", w, p.targets);
  require(p.targets == "increment" || p.targets == "raw_next_state",
          n["targets"] ? n["targets"] : n, "prior_data.targets must be increment or raw_next_state");
  opt(n, "condition_world", w, p.condition_world);
  if (const auto g = n["generate"]) {
    check_keys(g, "prior_data.generate", {"count", "gain", "dither", "seed"});
    p.has_generator = true;
    const std::string gw = "prior_data.generate";
    opt(g, "count", gw, p.generate_count);
    opt(g, "gain", gw, p.generate_gain);
    opt(g, "dither", gw, p.generate_dither);
    opt(g, "seed", gw, p.generate_seed);
    require(p.generate_count > 0 && p.generate_dither >= 0, g, "prior_data.generate: bad values");
  }
}

void parse_law(const YAML::Node& n, ExperimentConfig::Law& l) {
  const std::string w = "law";
  check_keys(n, w, {"name", "lower", "upper", "reference"});
  opt(n, "name", w, l.name);
  require(l.name == "gp_mean_tracking" || l.name == "linear_feedback",
          n["name"] ? n["name"] : n, "law.name must be gp_mean_tracking or linear_feedback");
  const auto lo = n["lower"];
  const auto hi = n["upper"];
  require(lo && hi, n, "law: lower and upper bounds are required");
  l.lower = seq<double>(lo, "law.lower");
  l.upper = seq<double>(hi, "law.upper");
  require(l.lower.size() == l.upper.size() && !l.lower.empty(), hi,
          "law: lower and upper must have the same nonzero length");
  for (std::size_t i = 0; i < l.lower.size(); ++i) {
    require(l.lower[i] <= l.upper[i], hi, "law: lower bound exceeds upper bound");
  }
  if (const auto r = n["reference"]) {
    const std::string rw = "law.reference";
    check_keys(r, rw, {"kind", "value", "offset", "amplitude", "period", "phase"});
    opt(r, "kind", rw, l.reference);
    require(l.reference == "zero" || l.reference == "constant" || l.reference == "sinusoid",
            r, "law.reference.kind must be zero, constant or sinusoid");
    opt(r, "value", rw, l.reference_value);
    opt(r, "offset", rw, l.reference_offset);
    opt(r, "amplitude", rw, l.reference_amplitude);
    opt(r, "period", rw, l.reference_period);
    opt(r, "phase", rw, l.reference_phase);
    require(l.reference_period > 0, r, "law.reference.period must be positive");
  }
}

void parse_cost(const YAML::Node& n, ExperimentConfig::Cost& c) {
  const std::string w = "cost";
  check_keys(n, w, {"kind", "state_weight", "input_weight"});
  opt(n, "kind", w, c.kind);
  require(c.kind == "tracking" || c.kind == "quadratic" || c.kind == "zero", n,
          "cost.kind must be tracking, quadratic or zero");
  opt(n, "state_weight", w, c.state_weight);
  opt(n, "input_weight", w, c.input_weight);
  require(c.state_weight >= 0 && c.input_weight >= 0, n, "cost: weights must be >= 0");
}

void parse_saa(const YAML::Node& n, ExperimentConfig::Saa& s) {
  const std::string w = "saa";
  check_keys(n, w, {"samples", "sample_counts", "n_starts", "draw_seed", "start_seed",
                    "max_iterations", "theta_tolerance", "cost_tolerance", "anticipate",
                    "threads"});
  req(n, "samples", w, s.samples);
  require(s.samples > 0, n["samples"], "saa.samples must be positive");
  if (const auto m = n["sample_counts"]) {
    s.sample_counts = seq<std::size_t>(m, "saa.sample_counts");
    for (auto v : s.sample_counts) require(v > 0, m, "saa.sample_counts must be positive");
  }
  opt(n, "n_starts", w, s.n_starts);
  require(s.n_starts > 0, n, "saa.n_starts must be positive");
  opt(n, "draw_seed", w, s.draw_seed);
  opt(n, "start_seed", w, s.start_seed);
  opt(n, "max_iterations", w, s.max_iterations);
  opt(n, "theta_tolerance", w, s.theta_tolerance);
  opt(n, "cost_tolerance", w, s.cost_tolerance);
  require(s.max_iterations > 0 && s.theta_tolerance > 0 && s.cost_tolerance > 0, n,
          "saa: iteration budget and tolerances must be positive");
  opt(n, "anticipate", w, s.anticipate);
  opt(n, "threads", w, s.threads);
  require(s.threads >= 0, n, "saa.threads must be >= 0");
}

void parse_evaluation(const YAML::Node& n, ExperimentConfig::Evaluation& e) {
  const std::string w = "evaluation";
  check_keys(n, w, {"true_g", "params", "n_runs", "seed", "theta"});
  opt(n, "true_g", w, e.true_g);
  require(e.true_g == "zero" || e.true_g == "linear" || e.true_g == "bump_sine", n,
          "evaluation.true_g must be zero, linear or bump_sine");
  if (const auto p = n["params"]) e.true_g_params = seq<double>(p, "evaluation.params");
  const std::size_t want = e.true_g == "zero" ? 0 : e.true_g == "linear" ? 1 : 4;
  require(e.true_g_params.size() == want, n["params"] ? n["params"] : n,
          "evaluation.params: " + e.true_g + " takes " + std::to_string(want) + " values");
  opt(n, "n_runs", w, e.n_runs);
  require(e.n_runs > 0, n, "evaluation.n_runs must be positive");
  opt(n, "seed", w, e.seed);
  if (const auto t = n["theta"]) e.theta = seq<double>(t, "evaluation.theta");
}

ExperimentConfig parse_node(const YAML::Node& root, const std::filesystem::path& base) {
  check_keys(root, "config", {"schema_version", "system", "kernel", "prior_data", "law",
                              "cost", "saa", "evaluation"});
  const auto v = root["schema_version"];
  if (!v) fail(root, "config: missing schema_version");
  if (scalar<int>(v, "schema_version") != kConfigSchemaVersion) {
    fail(v, "schema_version " + v.Scalar() + " is not supported (expected " +
                std::to_string(kConfigSchemaVersion) + ")");
  }
  ExperimentConfig c;
  const auto need = [&](const char* key) {
    const auto n = root[key];
    if (!n) fail(root, std::string("config: missing section \"") + key + "\"");
    return n;
  };
  parse_system(need("system"), c.system);
  if (const auto n = root["kernel"]) parse_kernel(n, c.kernel);
  if (const auto n = root["prior_data"]) parse_prior(n, c.prior_data, base);
  parse_law(need("law"), c.law);
  if (const auto n = root["cost"]) parse_cost(n, c.cost);
  parse_saa(need("saa"), c.saa);
  if (const auto n = root["evaluation"]) parse_evaluation(n, c.evaluation);

  if (c.kernel.train && c.prior_data.path.empty()) {
    fail(root["kernel"], "kernel.mode train needs prior_data.path");
  }
  if (c.law.name == "gp_mean_tracking") {
    if (c.law.lower.size() != 2) fail(root["law"], "law: gp_mean_tracking takes 2 parameters");
    if (c.system.state_dim != c.system.input_dim) {
      fail(root["system"], "gp_mean_tracking needs state_dim == input_dim");
    }
  } else if (c.law.lower.size() != c.system.state_dim * c.system.input_dim) {
    fail(root["law"], "law: linear_feedback takes state_dim*input_dim parameters");
  }
  if (c.evaluation.theta && c.evaluation.theta->size() != c.law.lower.size()) {
    fail(root["evaluation"]["theta"], "evaluation.theta has the wrong length");
  }
  return c;
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const {
  using nlohmann::json;
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["system"] = {{"dynamics", system.dynamics},
                 {"a", system.dynamics_a},
                 {"b", system.dynamics_b},
                 {"state_dim", system.state_dim},
                 {"input_dim", system.input_dim},
                 {"process_noise_std", system.process_noise_std},
                 {"horizon", system.horizon},
                 {"x0", system.x0},
                 {"divergence_bound", system.divergence_bound}};
  j["kernel"] = {{"mode", kernel.train ? "train" : "fixed"},
                 {"signal_variance", kernel.signal_variance},
                 {"lengthscale", kernel.lengthscale},
                 {"projection", kernel.projection},
                 {"restarts", kernel.restarts},
                 {"max_iterations", kernel.max_iterations},
                 {"seed", kernel.seed}};
  json prior = {{"path", prior_data.path},
                        {"targets", prior_data.targets},
                        {"condition_world", prior_data.condition_world}};
  if (prior_data.has_generator) {
    prior["generate"] = {{"count", prior_data.generate_count},
                         {"gain", prior_data.generate_gain},
                         {"dither", prior_data.generate_dither},
                         {"seed", prior_data.generate_seed}};
  }
  j["prior_data"] = prior;
  j["law"] = {{"name", law.name},
              {"lower", law.lower},
              {"upper", law.upper},
              {"reference",
               {{"kind", law.reference},
                {"value", law.reference_value},
                {"offset", law.reference_offset},
                {"amplitude", law.reference_amplitude},
                {"period", law.reference_period},
                {"phase", law.reference_phase}}}};
  j["cost"] = {{"kind", cost.kind},
               {"state_weight", cost.state_weight},
               {"input_weight", cost.input_weight}};
  j["saa"] = {{"samples", saa.samples},
              {"sample_counts", saa.sample_counts},
              {"n_starts", saa.n_starts},
              {"draw_seed", saa.draw_seed},
              {"start_seed", saa.start_seed},
              {"max_iterations", saa.max_iterations},
              {"theta_tolerance", saa.theta_tolerance},
              {"cost_tolerance", saa.cost_tolerance},
              {"anticipate", saa.anticipate},
              {"threads", saa.threads}};
  json ev = {{"true_g", evaluation.true_g},
                     {"params", evaluation.true_g_params},
                     {"n_runs", evaluation.n_runs},
                     {"seed", evaluation.seed}};
  if (evaluation.theta) ev["theta"] = *evaluation.theta;
  j["evaluation"] = ev;
  return j;
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("YAML syntax: " + e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  if (!root || root.IsNull()) throw ConfigError("config is empty");
  return parse_node(root, std::filesystem::absolute(base_dir));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  const auto base = std::filesystem::absolute(path).parent_path();
  return parse_config(text.str(), base.string());
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = config.to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace antler
