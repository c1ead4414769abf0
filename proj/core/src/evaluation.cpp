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
#include "antler/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "antler/errors.hpp"
#include "antler/parallel.hpp"

namespace antler {

void TrueSystemSpec::validate() const {
  if (state_dim == 0 || input_dim == 0) {
    throw std::invalid_argument("true system: dimensions must be > 0");
  }
  if (!prior_model || !true_g) {
    throw std::invalid_argument("true system: prior_model and true_g are required");
  }
  if (process_noise_std.size() != state_dim) {
    throw std::invalid_argument("true system: one noise std per state dimension");
  }
  for (double s : process_noise_std) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("true system: process noise std must be >= 0");
    }
  }
  if (horizon == 0) throw std::invalid_argument("true system: horizon must be > 0");
}

DynamicsFn make_true_g(const std::string& name, std::span<const double> params) {
  // Either no parameters (defaults) or the full set; partial lists are errors.
  auto expect = [&](std::size_t count) {
    if (!params.empty() && params.size() != count) {
      throw std::invalid_argument("true_g '" + name + "' takes " + std::to_string(count) +
                                  " parameters, got " + std::to_string(params.size()));
    }
  };
  auto param = [&](std::size_t i, double fallback) {
    return i < params.size() ? params[i] : fallback;
  };
  if (name == "zero") {
    expect(0);
    return [](std::span<const double>, std::span<const double>, std::span<double> out) {
      for (double& v : out) v = 0.0;
    };
  }
  if (name == "linear") {
    expect(1);
    const double a = param(0, 0.0);
    return [a](std::span<const double> x, std::span<const double>, std::span<double> out) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i];
    };
  }
  if (name == "bump_sine") {
    expect(4);
    const double a = param(0, 1.0), b = param(1, 1.0), c = param(2, 0.0), d = param(3, 0.0);
    return [a, b, c, d](std::span<const double> x, std::span<const double>,
                        std::span<double> out) {
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = a * std::sin(b * x[i]) + c * std::tanh(x[i] - d);
      }
    };
  }
  throw std::invalid_argument("unknown true_g '" + name + "'");
}

std::uint64_t run_seed(std::uint64_t seed, std::size_t run) {
  // splitmix64 finalizer over (seed, run).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(run) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Trajectory simulate_true_system(const EvaluationSetup& setup,
                                const ControlLaw& law,
                                std::span<const double> theta,
                                std::uint64_t seed) {
  const TrueSystemSpec& sys = setup.system;
  sys.validate();
  const std::size_t nx = sys.state_dim, nu = sys.input_dim, horizon = sys.horizon;
  if (setup.x0.size() != nx || law.state_dim() != nx || law.input_dim() != nu) {
    throw std::invalid_argument("simulate_true_system: dimension mismatch");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Trajectory traj;
  traj.state_dim = nx;
  traj.input_dim = nu;
  traj.states.assign(setup.x0.begin(), setup.x0.end());
  LearnerDataset learner = setup.learner_prior;
  std::vector<double> aug(nx + nu), prior_next(nx), g(nx), next(nx), targets(nx);
  for (std::size_t t = 0; t < horizon; ++t) {
    std::copy_n(traj.states.begin() + static_cast<std::ptrdiff_t>(t * nx), nx, aug.begin());
    std::span<const double> x(aug.data(), nx);
    std::span<const double> u(aug.data() + nx, nu);
    law.evaluate(learner, theta, x, t, std::span<double>(aug.data() + nx, nu));
    sys.prior_model(x, u, prior_next);
    sys.true_g(x, u, g);
    for (std::size_t i = 0; i < nx; ++i) {
      const double w = sys.process_noise_std[i] * normal(rng);
      next[i] = prior_next[i] + g[i] + w;
      if (!std::isfinite(next[i]) || std::abs(next[i]) > sys.divergence_bound) {
        std::ostringstream msg;
        msg << "true system diverged at step " << t << ", state[" << i << "] = " << next[i];
        throw DivergenceError(msg.str(), 0, t);
      }
      targets[i] = next[i] - prior_next[i];
    }
    if (law.uses_data()) learner.append(aug, targets);
    traj.inputs.insert(traj.inputs.end(), u.begin(), u.end());
    traj.g_samples.insert(traj.g_samples.end(), g.begin(), g.end());
    traj.states.insert(traj.states.end(), next.begin(), next.end());
  }
  traj.terminal_input.resize(nu);
  law.evaluate(learner, theta, traj.state(horizon), horizon, traj.terminal_input);
  if (setup.cost) {
    traj.stage_costs.resize(horizon + 1);
    for (std::size_t t = 0; t < horizon; ++t) {
      traj.stage_costs[t] = (*setup.cost)(t, traj.state(t), traj.input(t));
    }
    traj.stage_costs[horizon] =
        (*setup.cost)(horizon, traj.state(horizon), traj.terminal_input);
  }
  return traj;
}

McSummary summarize(std::vector<RunRecord> records, std::uint64_t seed) {
  McSummary s;
  s.seed = seed;
  s.runs = records.size();
  std::vector<double> totals;
  std::size_t steps = 0;
  for (const auto& r : records) {
    if (r.diverged) {
      ++s.diverged;
      continue;
    }
    totals.push_back(r.total_cost);
    steps = std::max(steps, r.errors.size());
  }
  const std::size_t n = totals.size();
  if (n > 0) {
    s.mean_total_cost = pairwise_sum(totals) / static_cast<double>(n);
    if (n > 1) {
      std::vector<double> sq(n);
      for (std::size_t k = 0; k < n; ++k) {
        sq[k] = (totals[k] - s.mean_total_cost) * (totals[k] - s.mean_total_cost);
      }
      s.std_total_cost = std::sqrt(pairwise_sum(sq) / static_cast<double>(n - 1));
    }
    s.per_step_error_mean.assign(steps, 0.0);
    s.per_step_error_std.assign(steps, 0.0);
    s.per_step_cost_mean.assign(steps, 0.0);
    std::vector<double> col, ccol;
    for (std::size_t t = 0; t < steps; ++t) {
      col.clear();
      ccol.clear();
      for (const auto& r : records) {
        if (r.diverged) continue;
        col.push_back(r.errors[t]);
        ccol.push_back(r.stage_costs[t]);
      }
      const double mean = pairwise_sum(col) / static_cast<double>(n);
      s.per_step_error_mean[t] = mean;
      s.per_step_cost_mean[t] = pairwise_sum(ccol) / static_cast<double>(n);
      if (n > 1) {
        for (double& v : col) v = (v - mean) * (v - mean);
        s.per_step_error_std[t] = std::sqrt(pairwise_sum(col) / static_cast<double>(n - 1));
      }
    }
  }
  s.records = std::move(records);
  return s;
}

McSummary monte_carlo(const EvaluationSetup& setup, const ControlLaw& law,
                      std::span<const double> theta, std::size_t n_runs,
                      std::uint64_t seed, int threads) {
  if (n_runs == 0) throw std::invalid_argument("monte_carlo: n_runs must be >= 1");
  std::vector<RunRecord> records(n_runs);
  parallel_for(n_runs, threads, [&](std::size_t i) {
    RunRecord& r = records[i];
    r.run = i;
    r.seed = run_seed(seed, i);
    try {
      const Trajectory tr = simulate_true_system(setup, law, theta, r.seed);
      r.stage_costs = tr.stage_costs;
      r.total_cost = tr.total_cost();
      r.errors.resize(tr.steps() + 1);
      for (std::size_t t = 0; t <= tr.steps(); ++t) {
        const double ref = setup.reference ? setup.reference->at(t) : 0.0;
        r.errors[t] = tr.state(t)[0] - ref;
      }
    } catch (const DivergenceError&) {
      r.diverged = true;
    }
  });
  return summarize(std::move(records), seed);
}

Comparison compare_laws(const EvaluationSetup& setup,
                        const ControlLaw& anticipating_law,
                        std::span<const double> theta_anticipating,
                        const ControlLaw& baseline_law,
                        std::span<const double> theta_baseline,
                        std::size_t n_runs, std::uint64_t seed, int threads) {
  Comparison c;
  c.anticipating = monte_carlo(setup, anticipating_law, theta_anticipating, n_runs, seed, threads);
  c.baseline = monte_carlo(setup, baseline_law, theta_baseline, n_runs, seed, threads);
  std::vector<double> diffs;
  for (std::size_t i = 0; i < n_runs; ++i) {
    const auto& a = c.anticipating.records[i];
    const auto& b = c.baseline.records[i];
    if (a.diverged || b.diverged) continue;
    diffs.push_back(a.total_cost - b.total_cost);
  }
  c.paired_runs = diffs.size();
  if (!diffs.empty()) {
    const double n = static_cast<double>(diffs.size());
    c.mean_difference = pairwise_sum(diffs) / n;
    if (diffs.size() > 1) {
      std::vector<double> sq(diffs.size());
      for (std::size_t k = 0; k < diffs.size(); ++k) {
        sq[k] = (diffs[k] - c.mean_difference) * (diffs[k] - c.mean_difference);
      }
      c.difference_std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0)) / std::sqrt(n);
    }
  }
  return c;
}

Comparison compare_laws(const EvaluationSetup& setup,
                        std::shared_ptr<const ControlLaw> law,
                        std::span<const double> theta_anticipating,
                        std::span<const double> theta_baseline,
                        std::size_t n_runs, std::uint64_t seed, int threads) {
  const auto baseline = data_independent_counterpart(law, setup.learner_prior);
  return compare_laws(setup, *law, theta_anticipating, *baseline, theta_baseline,
                      n_runs, seed, threads);
}

}  // namespace antler
