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

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

namespace antler {
namespace {

std::span<const double> one(const double& v) { return {&v, 1}; }

KernelSpec se(double s2, double l) {
  KernelSpec k;
  k.signal_variance = s2;
  k.lengthscale = l;
  return k;
}

double lml_oracle(const KernelSpec& k, const RegressionData& d, double noise) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd K(n, n);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = kernel_eval(k, d.input(i), d.input(j));
    K(i, i) += noise + k.jitter();
    y(i) = d.targets[i];
  }
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  const Eigen::MatrixXd L = llt.matrixL();
  const double logdet = 2.0 * L.diagonal().array().log().sum();
  return -0.5 * y.dot(llt.solve(y)) - 0.5 * logdet -
         0.5 * static_cast<double>(n) * std::log(2 * std::numbers::pi);
}

RegressionData sample_gp(const KernelSpec& k, double noise, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-3, 3);
  std::normal_distribution<double> nd;
  RegressionData d;
  d.input_dim = 1;
  std::vector<double> xs(n);
  for (auto& x : xs) x = ud(rng);
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) K(i, j) = kernel_eval(k, xs[i], xs[j]);
    K(i, i) += 1e-9;
  }
  const Eigen::MatrixXd L = K.llt().matrixL();
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = nd(rng);
  const Eigen::VectorXd f = L * z;
  for (int i = 0; i < n; ++i) d.push_back(one(xs[i]), f(i) + std::sqrt(noise) * nd(rng));
  return d;
}

TEST(Lml, SingleDatumClosedForm) {
  RegressionData d;
  d.input_dim = 1;
  d.push_back(one(0.4), 0.0);
  EXPECT_NEAR(log_marginal_likelihood(se(1, 1), d, 0.0), -0.91894, 1e-5);
  EXPECT_NEAR(log_marginal_likelihood(se(1, 1), d, 0.0),
              -0.5 * std::log(2 * std::numbers::pi), 1e-9);
  d.targets[0] = 1.0;
  EXPECT_NEAR(log_marginal_likelihood(se(1, 1), d, 0.0), -1.41894, 1e-5);
}

TEST(Lml, ZeroTargetsMaximizeDataFit) {
  auto d = sample_gp(se(1, 0.5), 0.01, 20, 1);
  auto zero = d;
  for (auto& y : zero.targets) y = 0.0;
  for (double s2 : {0.1, 1.0, 3.0}) {
    EXPECT_GT(log_marginal_likelihood(se(s2, 0.5), zero, 0.01),
              log_marginal_likelihood(se(s2, 0.5), d, 0.01));
  }
}

TEST(Lml, MatchesDenseOracle) {
  const auto d = sample_gp(se(1.5, 0.7), 0.05, 40, 2);
  for (const auto& k : {se(1, 1), se(0.3, 0.2), se(4, 3)}) {
    EXPECT_NEAR(log_marginal_likelihood(k, d, 0.05), lml_oracle(k, d, 0.05), 1e-8);
  }
}

TEST(Lml, GradientMatchesCentralDifferences) {
  const auto d = sample_gp(se(1.2, 0.6), 0.02, 30, 3);
  for (const auto& k : {se(1, 1), se(0.5, 0.3), se(2, 2)}) {
    const auto g = log_marginal_likelihood_with_gradient(k, d, 0.02);
    EXPECT_NEAR(g.value, log_marginal_likelihood(k, d, 0.02), 1e-10);
    const double h = 1e-5;
    auto at = [&](double ds, double dl) {
      return log_marginal_likelihood(
          se(k.signal_variance * std::exp(ds), k.lengthscale * std::exp(dl)), d, 0.02);
    };
    const double fd_s = (at(h, 0) - at(-h, 0)) / (2 * h);
    const double fd_l = (at(0, h) - at(0, -h)) / (2 * h);
    EXPECT_NEAR(g.d_log_signal_variance, fd_s, 1e-4 * std::max(1.0, std::abs(fd_s)));
    EXPECT_NEAR(g.d_log_lengthscale, fd_l, 1e-4 * std::max(1.0, std::abs(fd_l)));
  }
}

TEST(Lml, RejectsEmptyData) {
  RegressionData d;
  d.input_dim = 1;
  EXPECT_THROW(log_marginal_likelihood(se(1, 1), d, 0.0), std::invalid_argument);
}

TEST(Training, RecoversGenerativeLengthscale) {
  const double noise = 0.01;
  const auto d = sample_gp(se(1, 0.5), noise, 100, 4);
  const auto r = train_hyperparameters(d, noise, se(1, 1));
  EXPECT_GE(r.spec.lengthscale, 0.5 * 0.8);
  EXPECT_LE(r.spec.lengthscale, 0.5 * 1.25);
  EXPECT_GE(r.log_likelihood, r.initial_log_likelihood);
  EXPECT_NEAR(r.log_likelihood, log_marginal_likelihood(r.spec, d, noise), 1e-9);
}

TEST(Training, ZeroTargetsShrinkSignal) {
  RegressionData d;
  d.input_dim = 1;
  for (int i = 0; i < 20; ++i) d.push_back(one(0.3 * i), 0.0);
  const auto r = train_hyperparameters(d, 0.01, se(1, 1));
  EXPECT_LT(r.spec.signal_variance, 1e-3);
  EXPECT_GE(r.log_likelihood, r.initial_log_likelihood);
}

TEST(Training, NeverWorseThanInit) {
  const auto d = sample_gp(se(0.8, 0.4), 0.02, 50, 5);
  const auto best = train_hyperparameters(d, 0.02, se(1, 1));
  const auto again = train_hyperparameters(d, 0.02, best.spec);
  EXPECT_GE(again.log_likelihood, best.log_likelihood - 1e-12);
  EXPECT_NEAR(again.spec.lengthscale, best.spec.lengthscale, 1e-3 * best.spec.lengthscale);
  EXPECT_NEAR(again.spec.signal_variance, best.spec.signal_variance,
              1e-3 * best.spec.signal_variance);
}

TEST(Training, Deterministic) {
  const auto d = sample_gp(se(1, 0.5), 0.01, 40, 6);
  const auto a = train_hyperparameters(d, 0.01, se(1, 1));
  const auto b = train_hyperparameters(d, 0.01, se(1, 1));
  EXPECT_EQ(a.spec.signal_variance, b.spec.signal_variance);
  EXPECT_EQ(a.spec.lengthscale, b.spec.lengthscale);
}

TEST(Training, Preconditions) {
  RegressionData d;
  d.input_dim = 1;
  d.push_back(one(0.0), 1.0);
  EXPECT_THROW(train_hyperparameters(d, 0.01, se(1, 1)), std::invalid_argument);
  d.push_back(one(1.0), 1.0);
  EXPECT_THROW(train_hyperparameters(d, 0.01, se(0, 1)), std::invalid_argument);
}

}  // namespace
}  // namespace antler
