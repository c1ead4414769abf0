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
#include "antler/saa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "antler/errors.hpp"
#include "antler/parallel.hpp"

namespace antler {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cost_or_inf(const SaaProblem& problem, std::span<const double> theta) {
  try {
    return saa_cost(problem, theta);
  } catch (const DivergenceError&) {
    return kInf;
  } catch (const NumericError&) {
    return kInf;
  }
}

double projected_gradient_norm(const ParamBox& box, std::span<const double> theta,
                               std::span<const double> grad) {
  double s = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double p = std::clamp(theta[i] - grad[i], box.lower[i], box.upper[i]);
    s += (p - theta[i]) * (p - theta[i]);
  }
  return std::sqrt(s);
}

StartRecord descend(const SaaProblem& problem, std::vector<double> theta,
                    const OptimizerOptions& opt) {
  const ParamBox& box = problem.law->box();
  StartRecord rec;
  rec.initial_theta = theta;
  theta = box.project(theta);
  double cost = cost_or_inf(problem, theta);
  rec.cost_history.push_back(cost);
  if (!std::isfinite(cost)) {
    rec.final_theta = theta;
    rec.final_cost = cost;
    rec.diverged = true;
    return rec;
  }

  double min_width = kInf;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const double w = box.upper[i] - box.lower[i];
    if (w > 0.0) min_width = std::min(min_width, w);
  }
  if (!std::isfinite(min_width)) min_width = 1.0;

  std::vector<double> grad, prev_theta, prev_grad, cand(theta.size());
  double step = 0.0;
  bool finished = false;
  int it = 0;
  for (;; ++it) {
    try {
      grad = saa_cost_gradient(problem, theta);
    } catch (const std::exception&) {
      rec.gradient_norm = kInf;
      break;
    }
    const double pg = projected_gradient_norm(box, theta, grad);
    rec.gradient_norm = pg;
    if (finished || pg <= 1e-9 * (1.0 + std::abs(cost))) {
      rec.converged = true;
      break;
    }
    if (it >= opt.max_iterations) break;

    if (prev_grad.empty()) {
      double gn = 0.0;
      for (double g : grad) gn += g * g;
      step = 0.1 * min_width / std::sqrt(gn);
    } else {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        const double s = theta[i] - prev_theta[i];
        const double y = grad[i] - prev_grad[i];
        ss += s * s;
        sy += s * y;
      }
      step = sy > 0.0 ? ss / sy : 2.0 * step;
    }

    // Backtrack until the trial move would fall below the theta tolerance.
    // Smaller moves are below the resolution of the stopping rule, and on a
    // cost that is rough at that scale they only find decreases by chance.
    bool accepted = false;
    double cand_cost = kInf;
    for (int bt = 0; bt < 60; ++bt) {
      double decrease = 0.0, move = 0.0;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        cand[i] = std::clamp(theta[i] - step * grad[i], box.lower[i], box.upper[i]);
        decrease += grad[i] * (cand[i] - theta[i]);
        move = std::max(move, std::abs(cand[i] - theta[i]));
      }
      if (move == 0.0 || (bt > 0 && move < opt.theta_tolerance)) break;
      cand_cost = cost_or_inf(problem, cand);
      if (cand_cost <= cost + opt.armijo * decrease) {
        accepted = true;
        break;
      }
      step *= opt.shrink;
    }
    if (!accepted) {
      // No admissible descent step at the theta resolution: stationary.
      rec.converged = true;
      break;
    }
    double dtheta = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      dtheta = std::max(dtheta, std::abs(cand[i] - theta[i]));
    }
    const double dcost = cost - cand_cost;
    prev_theta = theta;
    prev_grad = grad;
    theta = cand;
    cost = cand_cost;
    rec.cost_history.push_back(cost);
    if (dtheta <= opt.theta_tolerance &&
        dcost <= opt.cost_tolerance * (1.0 + cost)) {
      finished = true;
    }
  }
  rec.iterations = static_cast<int>(rec.cost_history.size()) - 1;
  rec.final_theta = theta;
  rec.final_cost = cost;
  return rec;
}

bool better(const StartRecord& a, const StartRecord& b) {
  if (a.diverged != b.diverged) return !a.diverged;
  const double tol = 1e-12 * (1.0 + std::min(std::abs(a.final_cost), std::abs(b.final_cost)));
  if (std::abs(a.final_cost - b.final_cost) > tol) return a.final_cost < b.final_cost;
  if (a.gradient_norm != b.gradient_norm) return a.gradient_norm < b.gradient_norm;
  return std::lexicographical_compare(a.final_theta.begin(), a.final_theta.end(),
                                      b.final_theta.begin(), b.final_theta.end());
}

}  // namespace

void SaaProblem::validate() const {
  if (!model || !law || !cost) {
    throw std::invalid_argument("SaaProblem: model, law and cost are required");
  }
  const auto& sys = model->system();
  if (x0.size() != sys.state_dim) {
    throw std::invalid_argument("SaaProblem: x0 dimension mismatch");
  }
  if (draws.trajectories() == 0) {
    throw std::invalid_argument("SaaProblem: need at least one sample trajectory");
  }
  if (draws.steps() != sys.horizon || draws.state_dim() != sys.state_dim) {
    throw std::invalid_argument("SaaProblem: draws must have shape (M, N, n_x, 2)");
  }
}

double saa_cost(const SaaProblem& problem, std::span<const double> theta) {
  problem.validate();
  for (double v : theta) {
    if (!std::isfinite(v)) throw std::invalid_argument("saa_cost: non-finite theta");
  }
  const std::size_t m_count = problem.sample_count();
  std::vector<double> totals(m_count, 0.0);
  std::vector<char> diverged(m_count, 0);
  std::vector<std::size_t> diverged_step(m_count, 0);
  parallel_for(m_count, problem.threads, [&](std::size_t m) {
    try {
      const Trajectory tr = problem.model->rollout(
          *problem.law, theta, problem.draws.trajectory(m), problem.x0,
          problem.cost.get(), m);
      totals[m] = tr.total_cost();
    } catch (const DivergenceError& e) {
      diverged[m] = 1;
      diverged_step[m] = e.step();
    }
  });
  for (std::size_t m = 0; m < m_count; ++m) {
    if (diverged[m]) {
      std::ostringstream msg;
      msg << "saa_cost: trajectory " << m << " diverged at step " << diverged_step[m];
      throw DivergenceError(msg.str(), m, diverged_step[m]);
    }
  }
  return pairwise_sum(totals) / static_cast<double>(m_count);
}

std::vector<double> saa_cost_gradient(const SaaProblem& problem,
                                      std::span<const double> theta) {
  const ParamBox& box = problem.law->box();
  std::vector<double> grad(theta.size(), 0.0);
  std::vector<double> probe(theta.begin(), theta.end());
  double center = std::numeric_limits<double>::quiet_NaN();
  auto center_cost = [&] {
    if (std::isnan(center)) center = cost_or_inf(problem, theta);
    return center;
  };
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double h = std::max(1e-6, 1e-6 * std::abs(theta[i]));
    const bool can_up = box.dim() == 0 || theta[i] + h <= box.upper[i];
    const bool can_down = box.dim() == 0 || theta[i] - h >= box.lower[i];
    double up = kInf, down = kInf;
    if (can_up) {
      probe[i] = theta[i] + h;
      up = cost_or_inf(problem, probe);
    }
    if (can_down) {
      probe[i] = theta[i] - h;
      down = cost_or_inf(problem, probe);
    }
    probe[i] = theta[i];
    if (std::isfinite(up) && std::isfinite(down)) {
      grad[i] = (up - down) / (2.0 * h);
    } else if (std::isfinite(up) && std::isfinite(center_cost())) {
      grad[i] = (up - center_cost()) / h;
    } else if (std::isfinite(down) && std::isfinite(center_cost())) {
      grad[i] = (center_cost() - down) / h;
    } else {
      throw DivergenceError("saa_cost_gradient: cost diverges on both sides of coordinate " +
                                std::to_string(i), 0, 0);
    }
  }
  return grad;
}

OptResult antler_optimize(const SaaProblem& problem,
                          const OptimizerOptions& options) {
  problem.validate();
  const ParamBox& box = problem.law->box();
  if (options.n_starts < 1) throw std::invalid_argument("antler_optimize: n_starts must be >= 1");

  std::vector<std::vector<double>> starts;
  for (const auto& p : options.initial_points) {
    if (static_cast<int>(starts.size()) >= options.n_starts) break;
    if (p.size() != box.dim()) throw std::invalid_argument("antler_optimize: initial point dimension");
    starts.push_back(p);
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(starts.size()) < options.n_starts) {
    std::vector<double> p(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
      p[i] = box.lower[i] + unit(rng) * (box.upper[i] - box.lower[i]);
    }
    starts.push_back(std::move(p));
  }

  OptResult result;
  for (const auto& s : starts) result.starts.push_back(descend(problem, s, options));
  std::size_t best = 0;
  for (std::size_t k = 1; k < result.starts.size(); ++k) {
    if (better(result.starts[k], result.starts[best])) best = k;
  }
  const StartRecord& winner = result.starts[best];
  if (winner.diverged) {
    throw DivergenceError("antler_optimize: all " + std::to_string(starts.size()) +
                              " starts diverged", 0, 0);
  }
  result.best_start = best;
  result.theta_star = winner.final_theta;
  result.cost_star = winner.final_cost;
  result.gradient_norm = winner.gradient_norm;
  return result;
}

std::vector<StudyRow> convergence_study(const SaaProblem& problem,
                                        std::span<const std::size_t> sample_counts,
                                        const OptimizerOptions& options) {
  for (std::size_t k = 1; k < sample_counts.size(); ++k) {
    if (sample_counts[k] < sample_counts[k - 1]) {
      throw std::invalid_argument("convergence_study: sample counts must be nondecreasing");
    }
  }
  std::vector<StudyRow> rows;
  for (std::size_t m : sample_counts) {
    SaaProblem sub = problem;
    sub.draws = problem.draws.prefix(m);
    const auto t0 = std::chrono::steady_clock::now();
    StudyRow row;
    row.samples = m;
    row.result = antler_optimize(sub, options);
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.theta = row.result.theta_star;
    row.cost = row.result.cost_star;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace antler
