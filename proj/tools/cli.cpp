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
#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "antler/config.hpp"
#include "antler/errors.hpp"
#include "antler/experiment.hpp"
#include "antler/prior_data.hpp"

namespace antler::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

struct Common {
  std::string config_path;
  std::string out_dir;
  int threads = -1;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

fs::path make_run_dir(const Common& c, const std::string& hash) {
  fs::path dir;
  if (!c.out_dir.empty()) {
    dir = c.out_dir;
  } else {
    const char* root = std::getenv("ANTLER_RUN_ROOT");
    const fs::path base = root && *root ? root : "runs";
    const std::string stem = timestamp() + "-" + hash.substr(0, 12);
    dir = base / stem;
    for (int k = 2; fs::exists(dir); ++k) dir = base / (stem + "-" + std::to_string(k));
  }
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig load(const Common& c) {
  auto cfg = load_config(c.config_path);
  if (c.threads >= 0) cfg.saa.threads = c.threads;
  return cfg;
}

json header(const Experiment& e, const std::string& command) {
  const auto& s = e.config.saa;
  return json{{"schema_version", kConfigSchemaVersion},
              {"command", command},
              {"config_hash", e.hash},
              {"seeds",
               {{"draw_seed", s.draw_seed},
                {"start_seed", s.start_seed},
                {"kernel_seed", e.config.kernel.seed},
                {"evaluation_seed", e.config.evaluation.seed}}},
              {"config", e.config.to_json()}};
}

// Trailing CSV columns shared by every row.
std::string tag_columns() { return "config_hash,draw_seed,start_seed,evaluation_seed"; }
std::string tag_values(const Experiment& e) {
  const auto& c = e.config;
  return e.hash + "," + std::to_string(c.saa.draw_seed) + "," +
         std::to_string(c.saa.start_seed) + "," + std::to_string(c.evaluation.seed);
}

json start_json(const StartRecord& s) {
  return json{{"initial_theta", s.initial_theta}, {"final_theta", s.final_theta},
              {"final_cost", s.final_cost},       {"iterations", s.iterations},
              {"converged", s.converged},         {"diverged", s.diverged},
              {"gradient_norm", s.gradient_norm}, {"cost_history", s.cost_history}};
}

json result_json(const OptResult& r) {
  json starts = json::array();
  for (const auto& s : r.starts) starts.push_back(start_json(s));
  return json{{"theta_star", r.theta_star},
              {"cost_star", r.cost_star},
              {"gradient_norm", r.gradient_norm},
              {"best_start", r.best_start},
              {"starts", starts}};
}

struct StepStats {
  std::vector<double> error_mean, error_std, cost_mean;
};

StepStats step_stats(const std::vector<Trajectory>& trajs, const Reference& ref) {
  StepStats s;
  if (trajs.empty()) return s;
  const std::size_t n = trajs.front().states.size() / trajs.front().state_dim;
  const double m = static_cast<double>(trajs.size());
  s.error_mean.assign(n, 0.0);
  s.error_std.assign(n, 0.0);
  s.cost_mean.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double se = 0.0, sc = 0.0;
    for (const auto& tr : trajs) {
      se += tr.state(t)[0] - ref.at(t);
      sc += tr.stage_costs.empty() ? 0.0 : tr.stage_costs[t];
    }
    const double mean = se / m;
    double ss = 0.0;
    for (const auto& tr : trajs) {
      const double d = tr.state(t)[0] - ref.at(t) - mean;
      ss += d * d;
    }
    s.error_mean[t] = mean;
    s.error_std[t] = trajs.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    s.cost_mean[t] = sc / m;
  }
  return s;
}

std::string steps_csv_header() { return "t,error_mean,error_std,cost_mean," + tag_columns() + "\n"; }

void append_steps_csv(std::string& out, const Experiment& e, const std::string& prefix,
                      const std::vector<double>& em, const std::vector<double>& es,
                      const std::vector<double>& cm) {
  const std::string tag = tag_values(e);
  for (std::size_t t = 0; t < em.size(); ++t) {
    out += prefix + std::to_string(t) + "," + num(em[t]) + "," + num(es[t]) + "," + num(cm[t]) +
           "," + tag + "\n";
  }
}

std::string rollouts_csv(const Experiment& e, const std::vector<Trajectory>& trajs) {
  const std::size_t nx = e.system.state_dim, nu = e.system.input_dim;
  std::string out = "m,t";
  for (std::size_t i = 1; i <= nx; ++i) out += ",x_" + std::to_string(i);
  for (std::size_t i = 1; i <= nu; ++i) out += ",u_" + std::to_string(i);
  out += ",c," + tag_columns() + "\n";
  const std::string tag = tag_values(e);
  for (std::size_t m = 0; m < trajs.size(); ++m) {
    const auto& tr = trajs[m];
    const std::size_t n = tr.steps();
    for (std::size_t t = 0; t <= n; ++t) {
      out += std::to_string(m) + "," + std::to_string(t);
      for (double v : tr.state(t)) out += "," + num(v);
      const auto u = t < n ? tr.input(t) : std::span<const double>(tr.terminal_input);
      for (double v : u) out += "," + num(v);
      out += "," + num(tr.stage_costs.empty() ? 0.0 : tr.stage_costs[t]) + "," + tag + "\n";
    }
  }
  return out;
}

std::vector<Trajectory> predicted_rollouts(const SaaProblem& p, std::span<const double> theta) {
  std::vector<Trajectory> out;
  out.reserve(p.sample_count());
  for (std::size_t m = 0; m < p.sample_count(); ++m) {
    out.push_back(p.model->rollout(*p.law, theta, p.draws.trajectory(m), p.x0, p.cost.get(), m));
  }
  return out;
}

json summary_json(const McSummary& s) {
  return json{{"runs", s.runs},
              {"diverged", s.diverged},
              {"mean_total_cost", s.mean_total_cost},
              {"std_total_cost", s.std_total_cost},
              {"per_step_error_mean", s.per_step_error_mean},
              {"per_step_error_std", s.per_step_error_std},
              {"per_step_cost_mean", s.per_step_cost_mean},
              {"seed", s.seed}};
}

void append_runs_csv(std::string& out, const Experiment& e, const std::string& prefix,
                     const McSummary& s) {
  const std::string tag = tag_values(e);
  for (const auto& r : s.records) {
    out += prefix + std::to_string(r.run) + "," + std::to_string(r.seed) + "," +
           (r.diverged ? "1" : "0") + "," + num(r.total_cost) + "," + tag + "\n";
  }
}

bool divergence_dominated(const McSummary& s) { return 2 * s.diverged > s.runs; }

// --- subcommands ---------------------------------------------------------

int cmd_validate(const Common& c, std::ostream& out) {
  const auto cfg = load(c);
  out << json{{"valid", true}, {"config_hash", config_hash(cfg)}, {"config", cfg.to_json()}}.dump()
      << "\n";
  return kOk;
}

int cmd_generate_prior(const Common& c, const std::string& output, std::ostream& out) {
  const auto cfg = load(c);
  if (!cfg.prior_data.has_generator) throw ConfigError("prior_data.generate block is missing");
  const std::string path = output.empty() ? cfg.prior_data.path : output;
  if (path.empty()) throw ConfigError("no output path: set prior_data.path or pass --output");
  const auto ts = true_system_from(cfg);
  const auto& g = cfg.prior_data;
  auto data = generate_prior_data(ts, cfg.system.x0, g.generate_gain, g.generate_dither,
                                  g.generate_count, g.generate_seed);
  if (g.targets == "raw_next_state") {
    std::vector<double> f(cfg.system.state_dim);
    for (std::size_t i = 0; i < data.size(); ++i) {
      ts.prior_model(data.input(i).first(cfg.system.state_dim),
                     data.input(i).subspan(cfg.system.state_dim), f);
      for (std::size_t d = 0; d < f.size(); ++d) data.targets[i * f.size() + d] += f[d];
    }
  }
  std::ostringstream s;
  write_prior_data(s, data);
  write_text(path, s.str());
  out << json{{"command", "generate-prior"}, {"path", path}, {"rows", data.size()}}.dump() << "\n";
  return kOk;
}

int cmd_train(const Common& c, std::ostream& out) {
  const auto e = build_experiment(load(c));
  const auto dir = make_run_dir(c, e.hash);
  auto j = header(e, "train-gp");
  j["prior_points"] = e.prior.size();
  j["kernels"] = e.kernels_json();
  write_json(dir / "gp.json", j);
  out << json{{"command", "train-gp"}, {"out_dir", dir.string()}, {"config_hash", e.hash},
              {"kernels", j["kernels"]}}.dump()
      << "\n";
  return kOk;
}

int cmd_optimize(const Common& c, std::optional<std::size_t> samples, bool counterpart,
                 std::ostream& out) {
  auto cfg = load(c);
  if (samples) cfg.saa.samples = *samples;
  if (counterpart) cfg.saa.anticipate = false;
  const auto e = build_experiment(std::move(cfg));
  const auto dir = make_run_dir(c, e.hash);
  const bool anticipate = e.config.saa.anticipate;
  const auto problem = e.problem(e.config.saa.samples, anticipate);
  const auto result = antler_optimize(problem, e.optimizer_options());

  const auto trajs = predicted_rollouts(problem, result.theta_star);
  const auto st = step_stats(trajs, *e.reference);

  auto j = header(e, "optimize");
  j["law"] = problem.law->name();
  j["anticipate"] = anticipate;
  j["samples"] = problem.sample_count();
  j["kernels"] = e.kernels_json();
  j["result"] = result_json(result);
  j["predicted"] = {{"per_step_error_mean", st.error_mean},
                    {"per_step_error_std", st.error_std},
                    {"per_step_cost_mean", st.cost_mean}};
  write_json(dir / "optimize.json", j);
  std::string steps = steps_csv_header();
  append_steps_csv(steps, e, "", st.error_mean, st.error_std, st.cost_mean);
  write_text(dir / "trajectories.csv", steps);
  write_text(dir / "rollouts.csv", rollouts_csv(e, trajs));
  out << json{{"command", "optimize"}, {"out_dir", dir.string()}, {"config_hash", e.hash},
              {"theta_star", result.theta_star}, {"cost_star", result.cost_star}}.dump()
      << "\n";
  return kOk;
}

int cmd_study(const Common& c, std::ostream& out) {
  const auto e = build_experiment(load(c));
  const auto dir = make_run_dir(c, e.hash);
  auto counts = e.config.saa.sample_counts;
  if (counts.empty()) counts = {e.config.saa.samples};
  const std::size_t max_m = *std::max_element(counts.begin(), counts.end());
  const auto problem = e.problem(max_m, e.config.saa.anticipate);
  const auto rows = convergence_study(problem, counts, e.optimizer_options());

  const std::size_t k = e.law->param_dim();
  std::string csv = "M";
  for (std::size_t i = 1; i <= k; ++i) csv += ",theta_" + std::to_string(i);
  csv += ",cost,gradient_norm,best_start,max_iterations," + tag_columns() + "\n";
  std::string timing = "M,wall_time_s\n";
  json jrows = json::array();
  const std::string tag = tag_values(e);
  for (const auto& r : rows) {
    int max_it = 0;
    for (const auto& s : r.result.starts) max_it = std::max(max_it, s.iterations);
    csv += std::to_string(r.samples);
    for (double v : r.theta) csv += "," + num(v);
    csv += "," + num(r.cost) + "," + num(r.result.gradient_norm) + "," +
           std::to_string(r.result.best_start) + "," + std::to_string(max_it) + "," + tag + "\n";
    timing += std::to_string(r.samples) + "," + num(r.wall_time_s) + "\n";
    auto jr = result_json(r.result);
    jr["samples"] = r.samples;
    jrows.push_back(std::move(jr));
  }
  auto j = header(e, "study");
  j["law"] = problem.law->name();
  j["kernels"] = e.kernels_json();
  j["rows"] = jrows;
  write_text(dir / "study.csv", csv);
  write_json(dir / "study.json", j);
  // Wall time varies run to run, so it stays out of the reproducible files.
  write_text(dir / "study_timing.csv", timing);
  out << json{{"command", "study"}, {"out_dir", dir.string()}, {"config_hash", e.hash},
              {"rows", rows.size()}}.dump()
      << "\n";
  return kOk;
}

int cmd_evaluate(const Common& c, std::optional<std::vector<double>> theta, bool counterpart,
                 std::ostream& out) {
  auto cfg = load(c);
  if (theta) cfg.evaluation.theta = *theta;
  if (counterpart) cfg.saa.anticipate = false;
  if (!cfg.evaluation.theta) throw ConfigError("evaluate needs evaluation.theta or --theta");
  if (cfg.evaluation.theta->size() != cfg.law.lower.size()) {
    throw ConfigError("theta has the wrong length");
  }
  const auto e = build_experiment(std::move(cfg));
  const auto dir = make_run_dir(c, e.hash);
  const auto& th = *e.config.evaluation.theta;
  const auto law = e.law_for(e.config.saa.anticipate);
  if (!law->box().contains(th)) throw ConfigError("theta lies outside the law's box");
  const auto s = monte_carlo(e.evaluation_setup(), *law, th, e.config.evaluation.n_runs,
                             e.config.evaluation.seed, e.config.saa.threads);

  std::string runs = "run,run_seed,diverged,total_cost," + tag_columns() + "\n";
  append_runs_csv(runs, e, "", s);
  write_text(dir / "mc_runs.csv", runs);
  std::string steps = steps_csv_header();
  append_steps_csv(steps, e, "", s.per_step_error_mean, s.per_step_error_std,
                   s.per_step_cost_mean);
  write_text(dir / "trajectories.csv", steps);
  auto j = header(e, "evaluate");
  j["law"] = law->name();
  j["theta"] = th;
  j["summary"] = summary_json(s);
  write_json(dir / "mc_summary.json", j);
  out << json{{"command", "evaluate"}, {"out_dir", dir.string()}, {"config_hash", e.hash},
              {"mean_total_cost", s.mean_total_cost}, {"diverged", s.diverged}}.dump()
      << "\n";
  return divergence_dominated(s) ? kDiverged : kOk;
}

int cmd_compare(const Common& c, std::optional<std::vector<double>> theta,
                std::optional<std::vector<double>> baseline, std::ostream& out) {
  const auto e = build_experiment(load(c));
  const auto dir = make_run_dir(c, e.hash);
  const auto opts = e.optimizer_options();
  const std::size_t m = e.config.saa.samples;
  const auto learn = e.problem(m, true);
  const auto base = e.problem(m, false);

  json arms = json::object();
  auto pick = [&](const std::optional<std::vector<double>>& given, const SaaProblem& p,
                  const char* key) {
    json a;
    std::vector<double> th;
    if (given) {
      if (given->size() != p.law->param_dim() || !p.law->box().contains(*given)) {
        throw ConfigError(std::string(key) + " theta has the wrong length or leaves the box");
      }
      th = *given;
      a["optimized"] = false;
    } else {
      const auto r = antler_optimize(p, opts);
      th = r.theta_star;
      a["optimized"] = true;
      a["result"] = result_json(r);
    }
    a["law"] = p.law->name();
    a["theta"] = th;
    a["predicted_cost"] = saa_cost(p, th);
    arms[key] = a;
    return th;
  };
  const auto th_a = pick(theta, learn, "anticipating");
  const auto th_b = pick(baseline, base, "baseline");

  const auto cmp = compare_laws(e.evaluation_setup(), e.law, th_a, th_b,
                                e.config.evaluation.n_runs, e.config.evaluation.seed,
                                e.config.saa.threads);
  arms["anticipating"]["monte_carlo"] = summary_json(cmp.anticipating);
  arms["baseline"]["monte_carlo"] = summary_json(cmp.baseline);
  const double predicted =
      arms["anticipating"]["predicted_cost"].get<double>() -
      arms["baseline"]["predicted_cost"].get<double>();
  const double se = cmp.difference_std_error;

  auto j = header(e, "compare");
  j["samples"] = m;
  j["kernels"] = e.kernels_json();
  j["arms"] = arms;
  j["paired_runs"] = cmp.paired_runs;
  j["mean_difference"] = cmp.mean_difference;
  j["difference_std_error"] = se;
  j["predicted_difference"] = predicted;
  j["sign_agrees"] = (predicted < 0) == (cmp.mean_difference < 0);
  write_json(dir / "compare.json", j);

  std::string runs = "arm,run,run_seed,diverged,total_cost," + tag_columns() + "\n";
  append_runs_csv(runs, e, "anticipating,", cmp.anticipating);
  append_runs_csv(runs, e, "baseline,", cmp.baseline);
  write_text(dir / "mc_runs.csv", runs);
  std::string steps = "arm,t,error_mean,error_std,cost_mean," + tag_columns() + "\n";
  append_steps_csv(steps, e, "anticipating,", cmp.anticipating.per_step_error_mean,
                   cmp.anticipating.per_step_error_std, cmp.anticipating.per_step_cost_mean);
  append_steps_csv(steps, e, "baseline,", cmp.baseline.per_step_error_mean,
                   cmp.baseline.per_step_error_std, cmp.baseline.per_step_cost_mean);
  write_text(dir / "trajectories.csv", steps);

  out << json{{"command", "compare"},
              {"out_dir", dir.string()},
              {"config_hash", e.hash},
              {"anticipating_mean", cmp.anticipating.mean_total_cost},
              {"baseline_mean", cmp.baseline.mean_total_cost},
              {"mean_difference", cmp.mean_difference},
              {"difference_std_error", se}}.dump()
      << "\n";
  return divergence_dominated(cmp.anticipating) || divergence_dominated(cmp.baseline) ? kDiverged
                                                                                       : kOk;
}

int report(std::ostream& err, int code, const char* kind, const std::string& message,
           int line = 0) {
  json j{{"kind", kind}, {"message", message}};
  if (line > 0) j["line"] = line;
  err << json{{"error", j}}.dump() << "\n";
  return code;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anticipatory learning controller tuning"};
  app.require_subcommand(1);
  Common common;
  std::optional<std::size_t> samples;
  std::optional<std::vector<double>> theta, baseline;
  bool counterpart = false;
  std::string output;

  auto add_common = [&](CLI::App* sub, bool run_dir) {
    sub->add_option("-c,--config", common.config_path, "experiment config (YAML)")
        ->required()
        ->check(CLI::ExistingFile);
    if (run_dir) {
      sub->add_option("-o,--out-dir", common.out_dir,
                      "output directory (default: $ANTLER_RUN_ROOT/<time>-<hash>)");
      sub->add_option("-j,--threads", common.threads, "worker threads, 0 = all cores")
          ->check(CLI::NonNegativeNumber);
    }
  };
  auto* validate = app.add_subcommand("validate-config", "check a config and print it");
  add_common(validate, false);
  auto* gen = app.add_subcommand("generate-prior", "write the prior dataset from the true system");
  add_common(gen, false);
  gen->add_option("--output", output, "CSV path (default: prior_data.path)");
  auto* train = app.add_subcommand("train-gp", "fit kernel hyperparameters");
  add_common(train, true);
  auto* optimize = app.add_subcommand("optimize", "minimize the sampled cost over theta");
  add_common(optimize, true);
  optimize->add_option("-M,--samples", samples, "override saa.samples")->check(CLI::PositiveNumber);
  optimize->add_flag("--counterpart", counterpart, "optimize the data-independent counterpart");
  auto* study = app.add_subcommand("study", "optimize for each of saa.sample_counts");
  add_common(study, true);
  auto* evaluate = app.add_subcommand("evaluate", "Monte Carlo on the true system");
  add_common(evaluate, true);
  evaluate->add_option("--theta", theta, "law parameters")->expected(1, -1)->delimiter(',');
  evaluate->add_flag("--counterpart", counterpart, "evaluate the data-independent counterpart");
  auto* compare = app.add_subcommand("compare", "paired Monte Carlo: learning vs counterpart");
  add_common(compare, true);
  compare->add_option("--theta", theta, "learning-law parameters (default: optimize)")
      ->expected(1, -1)
      ->delimiter(',');
  compare->add_option("--baseline-theta", baseline, "counterpart parameters (default: optimize)")
      ->expected(1, -1)
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report(err, kUsage, "usage", e.what());
  }

  try {
    if (validate->parsed()) return cmd_validate(common, out);
    if (gen->parsed()) return cmd_generate_prior(common, output, out);
    if (train->parsed()) return cmd_train(common, out);
    if (optimize->parsed()) return cmd_optimize(common, samples, counterpart, out);
    if (study->parsed()) return cmd_study(common, out);
    if (evaluate->parsed()) return cmd_evaluate(common, theta, counterpart, out);
    if (compare->parsed()) return cmd_compare(common, theta, baseline, out);
  } catch (const ConfigError& e) {
    return report(err, kConfigError, "config", e.what(), e.line());
  } catch (const std::invalid_argument& e) {
    return report(err, kConfigError, "config", e.what());
  } catch (const DivergenceError& e) {
    return report(err, kDiverged, "divergence", e.what());
  } catch (const NumericError& e) {
    return report(err, kNumericError, "numeric", e.what());
  } catch (const std::exception& e) {
    return report(err, kUsage, "runtime", e.what());
  }
  return kUsage;
}

}  // namespace antler::cli
