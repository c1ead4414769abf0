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
#include "antler/world_model.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "antler/errors.hpp"
#include "test_systems.hpp"

namespace antler {
namespace {

using testing::gain_law;
using testing::scalar_system;

std::vector<GpState> empty_world(const SystemSpec& s) {
  return {GpState(s.kernel(0), s.augmented_dim(), 0.0)};
}

TEST(OneStep, DegenerateIsDeterministic) {
  const auto s = scalar_system(0.0, 0.0, 1);
  const double aug[2] = {1.0, -1.0}, zf[1] = {0.7}, zw[1] = {-2.0};
  const auto r = one_step_sample(empty_world(s), s, aug, zf, zw);
  EXPECT_EQ(r.next_state[0], 0.0);
  EXPECT_EQ(r.g_values[0], 0.0);
}

TEST(OneStep, PriorDraw) {
  const auto s = scalar_system(1.0, 0.0, 1);
  const double aug[2] = {0.3, 0.0}, zf[1] = {1.0}, zw[1] = {5.0};
  const auto r = one_step_sample(empty_world(s), s, aug, zf, zw);
  EXPECT_DOUBLE_EQ(r.g_values[0], 1.0);
  EXPECT_DOUBLE_EQ(r.next_state[0], 0.3 + 1.0);
}

TEST(OneStep, AddsScaledProcessNoise) {
  const auto s = scalar_system(0.0, 0.5, 1);
  const double aug[2] = {1.0, 2.0}, zf[1] = {0.0}, zw[1] = {-2.0};
  const auto r = one_step_sample(empty_world(s), s, aug, zf, zw);
  EXPECT_DOUBLE_EQ(r.next_state[0], 3.0 - 1.0);
}

TEST(OneStep, RevisitIsDeterministic) {
  const auto s = scalar_system(1.0, 0.1, 1);
  auto world = empty_world(s);
  const double aug[2] = {0.4, -0.2}, zw[1] = {0.0};
  const double z0[1] = {0.8};
  const auto first = one_step_sample(world, s, aug, z0, zw);
  world[0].append(aug, first.g_values[0]);
  for (double z : {-3.0, -1.0, 0.0, 2.5}) {
    const double zf[1] = {z};
    const auto again = one_step_sample(world, s, aug, zf, zw);
    EXPECT_NEAR(again.g_values[0], first.g_values[0], 1e-6);
  }
}

TEST(OneStep, SequentialDrawsMatchJointPrior) {
  // Draw g(z1), condition, draw g(z2): the pair must follow N(0, K).
  const auto s = scalar_system(1.0, 0.0, 1);
  const double z1[2] = {0.0, 0.0}, z2[2] = {0.8, 0.0};
  const double k12 = std::exp(-0.64 / 2.0);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd;
  const int reps = 100000;
  double m1 = 0, m2 = 0, s11 = 0, s22 = 0, s12 = 0;
  const double zw[1] = {0.0};
  for (int r = 0; r < reps; ++r) {
    auto world = empty_world(s);
    const double a[1] = {nd(rng)}, b[1] = {nd(rng)};
    const double g1 = one_step_sample(world, s, z1, a, zw).g_values[0];
    world[0].append(z1, g1);
    const double g2 = one_step_sample(world, s, z2, b, zw).g_values[0];
    m1 += g1;
    m2 += g2;
    s11 += g1 * g1;
    s22 += g2 * g2;
    s12 += g1 * g2;
  }
  m1 /= reps;
  m2 /= reps;
  EXPECT_NEAR(m1, 0.0, 0.02);
  EXPECT_NEAR(m2, 0.0, 0.02);
  EXPECT_NEAR(s11 / reps - m1 * m1, 1.0, 0.05);
  EXPECT_NEAR(s22 / reps - m2 * m2, 1.0, 0.05);
  EXPECT_NEAR(s12 / reps - m1 * m2, k12, 0.05);
}

Trajectory run(const WorldModel& w, const ControlLaw& law, double theta, double x0,
               const RolloutDraws& d, std::size_t m = 0) {
  return w.rollout(law, std::span(&theta, 1), d.trajectory(m), std::span(&x0, 1), nullptr);
}

TEST(Rollout, DeadbeatContraction) {
  const WorldModel w(scalar_system(0.0, 0.0, 3));
  const auto d = RolloutDraws::generate(1, 3, 1, 1);
  const auto tr = run(w, *gain_law(), 1.0, 1.0, d);
  ASSERT_EQ(tr.states.size(), 4u);
  EXPECT_EQ(tr.states, (std::vector<double>{1, 0, 0, 0}));
  EXPECT_EQ(tr.inputs.size(), 3u);
  EXPECT_EQ(tr.g_samples.size(), 3u);
}

TEST(Rollout, HalfGain) {
  const WorldModel w(scalar_system(0.0, 0.0, 3));
  const auto d = RolloutDraws::generate(1, 3, 1, 1);
  const auto tr = run(w, *gain_law(), 0.5, 1.0, d);
  EXPECT_EQ(tr.states, (std::vector<double>{1, 0.5, 0.25, 0.125}));
}

TEST(Rollout, BitIdenticalRepeats) {
  auto s = scalar_system(0.8, 0.1, 40);
  MeasurementSet prior;
  prior.state_dim = prior.input_dim = 1;
  for (int i = 0; i < 10; ++i) {
    const double in[2] = {-1.0 + 0.2 * i, 0.0}, y = 0.3 * in[0];
    prior.push_back(in, std::span(&y, 1));
  }
  const WorldModel w(s, prior);
  const auto ref = testing::zero_reference(40);
  GpMeanTrackingLaw law(ref, ParamBox{{-1, -1}, {2, 2}});
  const auto d = RolloutDraws::generate(3, 40, 1, 9);
  const double theta[2] = {0.7, 1.0}, x0[1] = {0.5};
  for (std::size_t m = 0; m < 3; ++m) {
    const auto a = w.rollout(law, theta, d.trajectory(m), x0, nullptr);
    const auto b = w.rollout(law, theta, d.trajectory(m), x0, nullptr);
    EXPECT_EQ(a.states, b.states);
    EXPECT_EQ(a.inputs, b.inputs);
    EXPECT_EQ(a.g_samples, b.g_samples);
  }
}

TEST(Rollout, TransitionIdentityAndNoiseSeparation) {
  const double sw = 0.3;
  const WorldModel w(scalar_system(1.0, sw, 30));
  const auto d = RolloutDraws::generate(1, 30, 1, 4);
  const auto slice = d.trajectory(0);
  const auto tr = run(w, *gain_law(), 0.6, 0.2, d);
  for (std::size_t t = 0; t < 30; ++t) {
    const double x = tr.state(t)[0], u = tr.input(t)[0];
    const double next = tr.state(t + 1)[0];
    EXPECT_NEAR(next, x + u + tr.g_sample(t)[0] + sw * slice.process_noise(t, 0), 1e-12);
    // increment minus the stored g sample is exactly the process noise
    EXPECT_NEAR(next - (x + u) - tr.g_sample(t)[0], sw * slice.process_noise(t, 0), 1e-12);
  }
  const WorldModel w0(scalar_system(1.0, 0.0, 30));
  const auto tr0 = run(w0, *gain_law(), 0.6, 0.2, d);
  for (std::size_t t = 0; t < 30; ++t) {
    // without process noise the increment is the g sample, up to rounding of (a + g) - a
    EXPECT_NEAR(tr0.state(t + 1)[0] - (tr0.state(t)[0] + tr0.input(t)[0]), tr0.g_sample(t)[0],
                1e-12);
  }
}

TEST(Rollout, DivergenceGuardNamesStep) {
  const WorldModel w(scalar_system(0.0, 0.0, 40));
  const auto d = RolloutDraws::generate(1, 40, 1, 1);
  try {
    run(w, *gain_law(), -1.0, 1.0, d);  // x doubles each step
    FAIL() << "no divergence";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.step(), 19u);  // step 19 produces x_20 = 2^20 > 1e6
  }
}

TEST(Rollout, CounterpartMatchesWhenModelIsDegenerate) {
  const auto s = scalar_system(0.0, 0.2, 25);
  const WorldModel w(s);
  const auto ref = std::make_shared<Reference>(Reference::sinusoid(25, 0.5, 1.0, 10.0, 0.0));
  auto law = std::make_shared<GpMeanTrackingLaw>(ref, ParamBox{{-1, -1}, {2, 2}});
  auto cp = data_independent_counterpart(law, w.learner_prior());
  const auto d = RolloutDraws::generate(2, 25, 1, 3);
  const double theta[2] = {0.8, 0.9}, x0[1] = {0.0};
  for (std::size_t m = 0; m < 2; ++m) {
    const auto a = w.rollout(*law, theta, d.trajectory(m), x0, nullptr);
    const auto b = w.rollout(*cp, theta, d.trajectory(m), x0, nullptr);
    EXPECT_EQ(a.states, b.states);
  }
}

TEST(Rollout, RecordsStageCosts) {
  const WorldModel w(scalar_system(0.0, 0.0, 2));
  const auto d = RolloutDraws::generate(1, 2, 1, 1);
  QuadraticCost c(1.0, 2.0);
  const double theta = 0.5, x0 = 1.0;
  const auto tr = w.rollout(*gain_law(), std::span(&theta, 1), d.trajectory(0),
                            std::span(&x0, 1), &c);
  // x = 1, .5, .25 and u = -.5, -.25, -.125
  ASSERT_EQ(tr.stage_costs.size(), 3u);
  EXPECT_DOUBLE_EQ(tr.stage_costs[0], 1 + 2 * 0.25);
  EXPECT_DOUBLE_EQ(tr.stage_costs[2], 0.0625 + 2 * 0.015625);
  EXPECT_DOUBLE_EQ(tr.total_cost(), tr.stage_costs[0] + tr.stage_costs[1] + tr.stage_costs[2]);
}

TEST(Draws, ShapeSeedAndNestedPrefixes) {
  const auto big = RolloutDraws::generate(50, 12, 2, 77);
  EXPECT_EQ(big.values().size(), 50u * 12 * 2 * 2);
  EXPECT_EQ(big.seed(), 77u);
  const auto small = RolloutDraws::generate(20, 12, 2, 77);
  const auto pre = big.prefix(20);
  ASSERT_EQ(pre.values().size(), small.values().size());
  EXPECT_TRUE(std::equal(pre.values().begin(), pre.values().end(), small.values().begin()));
  const auto other = RolloutDraws::generate(20, 12, 2, 78);
  EXPECT_FALSE(std::equal(other.values().begin(), other.values().end(), small.values().begin()));
  EXPECT_THROW(RolloutDraws(2, 3, 1, std::vector<double>(5), 0), std::invalid_argument);
}

TEST(ExpectedState, SingleTrajectoryHasZeroVariance) {
  const WorldModel w(scalar_system(1.0, 0.3, 10));
  const auto d = RolloutDraws::generate(1, 10, 1, 2);
  const double theta = 0.5, x0 = 1.0;
  const auto est = expected_state_estimate(w, *gain_law(), std::span(&theta, 1), d,
                                           std::span(&x0, 1));
  const auto tr = run(w, *gain_law(), 0.5, 1.0, d);
  ASSERT_EQ(est.mean.size(), 11u);
  for (std::size_t t = 0; t <= 10; ++t) {
    EXPECT_EQ(est.mean[t], tr.states[t]);
    EXPECT_EQ(est.variance[t], 0.0);
  }
}

TEST(ExpectedState, DeterministicSystemHasZeroVariance) {
  const WorldModel w(scalar_system(0.0, 0.0, 10));
  const auto d = RolloutDraws::generate(25, 10, 1, 2);
  const double theta = 0.3, x0 = 1.0;
  const auto est = expected_state_estimate(w, *gain_law(), std::span(&theta, 1), d,
                                           std::span(&x0, 1));
  // identical trajectories; only rounding of the mean is left
  for (double v : est.variance) EXPECT_LE(v, 1e-24);
}

TEST(ExpectedState, LinearGaussianVarianceRecursion) {
  // x_{t+1} = (1 - theta) x_t + sw w_t:  var_{t+1} = (1 - theta)^2 var_t + sw^2
  const double sw = 0.5, theta = 0.4, x0 = 1.0;
  const std::size_t n = 10, m = 10000;
  const WorldModel w(scalar_system(0.0, sw, n));
  const auto d = RolloutDraws::generate(m, n, 1, 31);
  const auto est = expected_state_estimate(w, *gain_law(), std::span(&theta, 1), d,
                                           std::span(&x0, 1), 0);
  double var = 0.0, mean = x0;
  for (std::size_t t = 0; t <= n; ++t) {
    const double se_var = var * std::sqrt(2.0 / (m - 1.0));
    const double se_mean = std::sqrt(var / m);
    EXPECT_NEAR(est.variance[t], var, 3 * se_var + 1e-12) << "t=" << t;
    EXPECT_NEAR(est.mean[t], mean, 3 * se_mean + 1e-12) << "t=" << t;
    var = (1 - theta) * (1 - theta) * var + sw * sw;
    mean *= 1 - theta;
  }
}

TEST(WorldModel, PriorConditioningFlag) {
  const auto s = scalar_system(1.0, 0.1, 5);
  MeasurementSet prior;
  prior.state_dim = prior.input_dim = 1;
  const double in[2] = {0.0, 0.0}, y = 0.7;
  prior.push_back(in, std::span(&y, 1));
  const WorldModel on(s, prior);
  WorldOptions off_opts;
  off_opts.condition_world_on_prior = false;
  const WorldModel off(s, prior, off_opts);
  EXPECT_EQ(on.world_prior()[0].size(), 1u);
  EXPECT_EQ(off.world_prior()[0].size(), 0u);
  EXPECT_EQ(on.learner_prior().size(), 1u);
  EXPECT_EQ(off.learner_prior().size(), 1u);
  EXPECT_DOUBLE_EQ(on.world_prior()[0].point_noise()[0], 0.01);
}

TEST(SystemSpec, Validation) {
  auto s = scalar_system(1.0, 0.1, 5);
  EXPECT_NO_THROW(s.validate());
  s.process_noise_std = {-1};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = scalar_system(1.0, 0.1, 0);
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_THROW(make_dynamics("nope", 1, 1), std::invalid_argument);
}

}  // namespace
}  // namespace antler
