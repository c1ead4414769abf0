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

#include <cmath>

#include <gtest/gtest.h>

#include "antler/world_model.hpp"
#include "test_systems.hpp"

namespace antler {
namespace {

using testing::gain_law;
using testing::scalar_system;

EvaluationSetup setup(const std::string& g, std::vector<double> params, double sw,
                      std::size_t n, double x0 = 1.0) {
  EvaluationSetup s;
  s.system.prior_model = make_dynamics("integrator", 1, 1);
  s.system.true_g = make_true_g(g, params);
  s.system.process_noise_std = {sw};
  s.system.horizon = n;
  s.learner_prior = LearnerDataset(scalar_system(0.0, sw, n));
  s.x0 = {x0};
  s.cost = std::make_shared<QuadraticCost>(1.0, 0.0);
  s.reference = testing::zero_reference(n);
  return s;
}

TEST(TrueSystem, Deadbeat) {
  const auto s = setup("zero", {}, 0.0, 4);
  const double th = 1.0;
  const auto tr = simulate_true_system(s, *gain_law(), std::span(&th, 1), 5);
  EXPECT_EQ(tr.states, (std::vector<double>{1, 0, 0, 0, 0}));
}

TEST(TrueSystem, LinearDrift) {
  const auto s = setup("linear", {0.1}, 0.0, 2);
  const double th = 1.0;
  const auto tr = simulate_true_system(s, *gain_law(), std::span(&th, 1), 5);
  ASSERT_EQ(tr.states.size(), 3u);
  EXPECT_DOUBLE_EQ(tr.states[1], 0.1);
  EXPECT_DOUBLE_EQ(tr.states[2], 0.01);
}

TEST(TrueSystem, CoincidesWithDegenerateWorldModel) {
  const auto s = setup("zero", {}, 0.0, 6);
  const WorldModel w(scalar_system(0.0, 0.0, 6));
  const double th = 0.35, x0 = 1.0;
  const auto a = simulate_true_system(s, *gain_law(), std::span(&th, 1), 99);
  const auto d = RolloutDraws::generate(1, 6, 1, 1);
  const auto b = w.rollout(*gain_law(), std::span(&th, 1), d.trajectory(0), std::span(&x0, 1),
                           nullptr);
  EXPECT_EQ(a.states, b.states);
}

TEST(TrueSystem, LearnerAccumulatesMeasurements) {
  // With a learning law, repeated measurements of g = 0.5 pull the mean
  // toward the truth and the closed loop tracks better than the frozen law.
  auto s = setup("linear", {0.5}, 0.01, 40);
  s.learner_prior = LearnerDataset(scalar_system(1.0, 0.01, 40, "integrator", 4.0));
  s.cost = std::make_shared<TrackingCost>(s.reference);
  auto law = std::make_shared<GpMeanTrackingLaw>(s.reference, ParamBox{{-1, -1}, {2, 2}});
  auto cp = data_independent_counterpart(law, s.learner_prior);
  const double th[2] = {0.3, 1.0};
  const auto learn = simulate_true_system(s, *law, th, 2);
  const auto frozen = simulate_true_system(s, *cp, th, 2);
  EXPECT_LT(learn.total_cost(), frozen.total_cost());
}

TEST(TrueG, Catalog) {
  const double x[1] = {0.7}, u[1] = {0.0};
  double out[1];
  const double p[4] = {2.0, 0.5, 1.5, 0.2};
  make_true_g("bump_sine", p)(x, u, out);
  EXPECT_DOUBLE_EQ(out[0], 2.0 * std::sin(0.35) + 1.5 * std::tanh(0.5));
  EXPECT_THROW(make_true_g("bump_sine", std::span(p, 2)), std::invalid_argument);
  EXPECT_THROW(make_true_g("cubic", {}), std::invalid_argument);
}

TEST(MonteCarlo, SingleRunHasZeroStd) {
  const auto s = setup("linear", {0.2}, 0.3, 10);
  const double th = 0.5;
  const auto mc = monte_carlo(s, *gain_law(), std::span(&th, 1), 1, 4);
  EXPECT_EQ(mc.runs, 1u);
  EXPECT_EQ(mc.std_total_cost, 0.0);
  EXPECT_EQ(mc.mean_total_cost, mc.records[0].total_cost);
}

TEST(MonteCarlo, DeterministicSystemHasZeroStd) {
  const auto s = setup("linear", {0.2}, 0.0, 10);
  const double th = 0.5;
  const auto mc = monte_carlo(s, *gain_law(), std::span(&th, 1), 7, 4);
  // identical runs; only rounding of the mean is left
  EXPECT_LE(mc.std_total_cost, 1e-12);
  for (double v : mc.per_step_error_std) EXPECT_LE(v, 1e-12);
}

TEST(MonteCarlo, SeedDeterminismAndThreads) {
  const auto s = setup("bump_sine", {1, 1, 0, 0}, 0.2, 20);
  const double th = 0.7;
  const auto a = monte_carlo(s, *gain_law(), std::span(&th, 1), 30, 8, 1);
  const auto b = monte_carlo(s, *gain_law(), std::span(&th, 1), 30, 8, 4);
  EXPECT_EQ(a.mean_total_cost, b.mean_total_cost);
  EXPECT_EQ(a.per_step_error_mean, b.per_step_error_mean);
  const auto c = monte_carlo(s, *gain_law(), std::span(&th, 1), 30, 9, 1);
  EXPECT_NE(a.mean_total_cost, c.mean_total_cost);
}

TEST(MonteCarlo, ReaggregatesFromRecords) {
  const auto s = setup("bump_sine", {1, 1, 0.5, 0}, 0.3, 15);
  const double th = 0.8;
  const auto mc = monte_carlo(s, *gain_law(), std::span(&th, 1), 25, 3);
  double sum = 0;
  for (const auto& r : mc.records) sum += r.total_cost;
  const double mean = sum / 25.0;
  double ss = 0;
  for (const auto& r : mc.records) ss += (r.total_cost - mean) * (r.total_cost - mean);
  EXPECT_NEAR(mc.mean_total_cost, mean, 1e-12 * std::max(1.0, mean));
  EXPECT_NEAR(mc.std_total_cost, std::sqrt(ss / 24.0), 1e-12 * std::max(1.0, mean));
  const auto again = summarize(mc.records, mc.seed);
  EXPECT_NEAR(again.mean_total_cost, mc.mean_total_cost, 1e-12);
  EXPECT_NEAR(again.std_total_cost, mc.std_total_cost, 1e-12);
  for (std::size_t t = 0; t < mc.per_step_error_mean.size(); ++t) {
    EXPECT_NEAR(again.per_step_error_mean[t], mc.per_step_error_mean[t], 1e-12);
    EXPECT_NEAR(again.per_step_error_std[t], mc.per_step_error_std[t], 1e-12);
    EXPECT_NEAR(again.per_step_cost_mean[t], mc.per_step_cost_mean[t], 1e-12);
  }
}

TEST(MonteCarlo, DivergedRunsAreExcludedAndCounted) {
  // theta = -0.5 makes x' = 1.5 x + noise, which blows up in 40 steps.
  const auto s = setup("zero", {}, 0.5, 40);
  const double th = -0.5;
  const auto mc = monte_carlo(s, *gain_law(), std::span(&th, 1), 5, 1);
  EXPECT_EQ(mc.runs, 5u);
  EXPECT_EQ(mc.diverged, 5u);
  for (const auto& r : mc.records) EXPECT_TRUE(r.diverged);
}

TEST(Compare, IdenticalArmsGiveZeroDifference) {
  const auto s = setup("bump_sine", {1, 1, 0, 0}, 0.2, 20);
  const double th = 0.9;
  const auto c = compare_laws(s, *gain_law(), std::span(&th, 1), *gain_law(),
                              std::span(&th, 1), 20, 6);
  EXPECT_EQ(c.mean_difference, 0.0);
  EXPECT_EQ(c.difference_std_error, 0.0);
  EXPECT_EQ(c.paired_runs, 20u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(c.anticipating.records[i].seed, c.baseline.records[i].seed);
  }
}

TEST(Compare, DegenerateModelMakesLearningIrrelevant) {
  auto s = setup("zero", {}, 0.0, 20);
  s.reference = std::make_shared<Reference>(Reference::sinusoid(20, 0.5, 1.0, 10.0, 0.0));
  s.cost = std::make_shared<TrackingCost>(s.reference);
  auto law = std::make_shared<GpMeanTrackingLaw>(s.reference, ParamBox{{-1, -1}, {2, 2}});
  const double th[2] = {0.9, 1.1};
  const auto c = compare_laws(s, law, th, th, 10, 3);
  EXPECT_EQ(c.anticipating.mean_total_cost, c.baseline.mean_total_cost);
  EXPECT_EQ(c.mean_difference, 0.0);
}

TEST(Compare, PairedStandardError) {
  const auto s = setup("bump_sine", {1, 1, 0, 0}, 0.2, 20);
  const double a = 0.9, b = 0.4;
  const auto c = compare_laws(s, *gain_law(), std::span(&a, 1), *gain_law(), std::span(&b, 1),
                              30, 6);
  std::vector<double> d;
  for (std::size_t i = 0; i < 30; ++i) {
    d.push_back(c.anticipating.records[i].total_cost - c.baseline.records[i].total_cost);
  }
  double mean = 0;
  for (double v : d) mean += v / 30.0;
  double ss = 0;
  for (double v : d) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(c.mean_difference, mean, 1e-10);
  EXPECT_NEAR(c.difference_std_error, std::sqrt(ss / 29.0 / 30.0), 1e-10);
}

}  // namespace
}  // namespace antler
