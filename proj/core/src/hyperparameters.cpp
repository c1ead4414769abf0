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
#include "antler/hyperparameters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "antler/errors.hpp"

namespace antler {
namespace {

struct Factored {
  Eigen::MatrixXd signal;    // K without noise or jitter
  Eigen::MatrixXd scaled_d;  // |a-b|^2 / (2 l), elementwise
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd alpha;
  double value = 0.0;
};

Factored factor(const KernelSpec& spec, const RegressionData& data,
                double noise_variance) {
  if (data.size() == 0) {
    throw std::invalid_argument("log_marginal_likelihood: empty data");
  }
  spec.validate();
  const auto n = static_cast<Eigen::Index>(data.size());
  const std::size_t p = spec.projected_dim(data.input_dim);
  Factored f;
  f.signal.resize(n, n);
  f.scaled_d.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      auto a = data.input(static_cast<std::size_t>(i));
      auto b = data.input(static_cast<std::size_t>(j));
      double sq = 0.0;
      for (std::size_t d = 0; d < p; ++d) sq += (a[d] - b[d]) * (a[d] - b[d]);
      const double s = sq / (2.0 * spec.lengthscale);
      f.scaled_d(i, j) = f.scaled_d(j, i) = s;
      f.signal(i, j) = f.signal(j, i) = spec.signal_variance * std::exp(-s);
    }
  }
  Eigen::MatrixXd a = f.signal;
  a.diagonal().array() += noise_variance + spec.jitter();
  f.llt.compute(a);
  if (f.llt.info() != Eigen::Success) {
    throw NumericError("log_marginal_likelihood: Gram matrix not positive "
                       "definite",
                       0.0, data.size());
  }
  Eigen::Map<const Eigen::VectorXd> y(data.targets.data(), n);
  f.alpha = f.llt.solve(y);
  const Eigen::MatrixXd l = f.llt.matrixL();
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  f.value = -0.5 * y.dot(f.alpha) - 0.5 * log_det -
            0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  return f;
}

using LogPoint = std::array<double, 2>;

KernelSpec with_log(const KernelSpec& base, const LogPoint& z) {
  KernelSpec s = base;
  s.signal_variance = std::exp(z[0]);
  s.lengthscale = std::exp(z[1]);
  return s;
}

struct Ascent {
  LogPoint z;
  double value;
  bool converged;
  int iterations;
};

// Projected gradient ascent with Barzilai-Borwein trial steps and Armijo
// backtracking.
Ascent ascend(const RegressionData& data, double noise_variance,
              const KernelSpec& base, LogPoint z,
              const TrainingOptions& opt) {
  const double lo = std::log(opt.min_value);
  const double hi = std::log(opt.max_value);
  auto clamp = [&](LogPoint p) {
    for (double& v : p) v = std::clamp(v, lo, hi);
    return p;
  };
  auto eval = [&](const LogPoint& p, LmlValue& out) {
    try {
      out = log_marginal_likelihood_with_gradient(with_log(base, p), data,
                                                  noise_variance);
      return std::isfinite(out.value);
    } catch (const NumericError&) {
      return false;
    }
  };

  z = clamp(z);
  LmlValue cur;
  if (!eval(z, cur)) {
    return {z, -std::numeric_limits<double>::infinity(), false, 0};
  }
  double step = 0.1;
  LogPoint prev_z{};
  LogPoint prev_g{};
  bool have_prev = false;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const LogPoint g{cur.d_log_signal_variance, cur.d_log_lengthscale};
    // Projected gradient norm.
    const LogPoint probe = clamp({z[0] + g[0], z[1] + g[1]});
    const double pg = std::hypot(probe[0] - z[0], probe[1] - z[1]);
    if (pg <= opt.gradient_tolerance) return {z, cur.value, true, it};

    if (have_prev) {
      const double sx = z[0] - prev_z[0], sy = z[1] - prev_z[1];
      const double yx = g[0] - prev_g[0], yy = g[1] - prev_g[1];
      const double sty = sx * yx + sy * yy;
      if (sty < 0.0) step = std::clamp(-(sx * sx + sy * sy) / sty, 1e-8, 1e2);
    }
    bool accepted = false;
    LmlValue next;
    LogPoint cand{};
    for (int bt = 0; bt < 50; ++bt) {
      cand = clamp({z[0] + step * g[0], z[1] + step * g[1]});
      const double gain = g[0] * (cand[0] - z[0]) + g[1] * (cand[1] - z[1]);
      if (eval(cand, next) && next.value >= cur.value + 1e-4 * gain) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return {z, cur.value, true, it};
    const double dz = std::hypot(cand[0] - z[0], cand[1] - z[1]);
    const double dv = next.value - cur.value;
    prev_z = z;
    prev_g = g;
    have_prev = true;
    z = cand;
    cur = next;
    if (dz <= 1e-10 && dv <= 1e-12 * (1.0 + std::abs(cur.value))) {
      return {z, cur.value, true, it + 1};
    }
  }
  return {z, cur.value, false, opt.max_iterations};
}

}  // namespace

double log_marginal_likelihood(const KernelSpec& spec,
                               const RegressionData& data,
                               double noise_variance) {
  return factor(spec, data, noise_variance).value;
}

LmlValue log_marginal_likelihood_with_gradient(const KernelSpec& spec,
                                               const RegressionData& data,
                                               double noise_variance) {
  Factored f = factor(spec, data, noise_variance);
  const auto n = f.signal.rows();
  Eigen::MatrixXd inner = f.alpha * f.alpha.transpose() -
                          f.llt.solve(Eigen::MatrixXd::Identity(n, n));
  // dA/dlog(sf2) = K_signal + jitter I, since jitter scales with sf2.
  Eigen::MatrixXd d_signal = f.signal;
  d_signal.diagonal().array() += spec.jitter();
  Eigen::MatrixXd d_length = f.signal.cwiseProduct(f.scaled_d);
  LmlValue out;
  out.value = f.value;
  out.d_log_signal_variance = 0.5 * inner.cwiseProduct(d_signal).sum();
  out.d_log_lengthscale = 0.5 * inner.cwiseProduct(d_length).sum();
  return out;
}

TrainingResult train_hyperparameters(const RegressionData& data,
                                     double noise_variance,
                                     const KernelSpec& init,
                                     const TrainingOptions& options) {
  if (data.size() < 2) {
    throw std::invalid_argument("train_hyperparameters: need >= 2 points");
  }
  if (init.degenerate()) {
    throw std::invalid_argument(
        "train_hyperparameters: initial signal variance must be > 0");
  }
  TrainingResult result;
  result.spec = init;
  result.initial_log_likelihood =
      log_marginal_likelihood(init, data, noise_variance);
  result.log_likelihood = result.initial_log_likelihood;
  result.converged = true;

  const LogPoint start{std::log(init.signal_variance),
                       std::log(init.lengthscale)};
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> jitter(0.0, 1.0);
  for (int r = 0; r <= options.restarts; ++r) {
    LogPoint z = start;
    if (r > 0) {
      z[0] += jitter(rng);
      z[1] += jitter(rng);
    }
    const Ascent a = ascend(data, noise_variance, init, z, options);
    if (a.value > result.log_likelihood) {
      result.spec = with_log(init, a.z);
      result.log_likelihood = a.value;
      result.converged = a.converged;
      result.iterations = a.iterations;
    }
  }
  return result;
}

}  // namespace antler
