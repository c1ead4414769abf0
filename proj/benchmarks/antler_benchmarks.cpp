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
#include <memory>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "antler/control_law.hpp"
#include "antler/gp.hpp"
#include "antler/saa.hpp"
#include "antler/world_model.hpp"

namespace {

using namespace antler;

void BM_GpAppend(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = 3.0 * nd(rng);
    ys[i] = nd(rng);
  }
  for (auto _ : state) {
    GpState gp(KernelSpec{}, 1, 0.01);
    for (std::size_t i = 0; i < n; ++i) gp.append(std::span(&xs[i], 1), ys[i]);
    benchmark::DoNotOptimize(gp.size());
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_GpAppend)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_GpPosterior(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  GpState gp(KernelSpec{}, 1, 0.01);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 3.0 * nd(rng);
    gp.append(std::span(&x, 1), nd(rng));
  }
  double q = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gp.posterior(std::span(&q, 1)));
    q += 1e-3;
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_GpPosterior)->RangeMultiplier(2)->Range(32, 512)->Complexity();

struct Scalar {
  std::shared_ptr<WorldModel> model;
  std::shared_ptr<const ControlLaw> law;
  std::shared_ptr<const StageCost> cost;
  std::shared_ptr<const Reference> ref;

  explicit Scalar(std::size_t horizon) {
    SystemSpec sys;
    sys.prior_model = make_dynamics("integrator", 1, 1);
    sys.process_noise_std = {0.1};
    KernelSpec k;
    k.projection = InputProjection::kStateOnly;
    sys.kernels = {k};
    sys.horizon = horizon;
    MeasurementSet prior;
    prior.state_dim = 1;
    prior.input_dim = 1;
    for (int i = 0; i < 50; ++i) {
      const double in[2] = {-2.0 + 0.08 * i, 0.0};
      const double y = std::sin(in[0]);
      prior.push_back(in, std::span(&y, 1));
    }
    model = std::make_shared<WorldModel>(sys, prior);
    ref = std::make_shared<Reference>(Reference::sinusoid(horizon, 1.0, 1.0, 50.0, 0.0));
    law = std::make_shared<GpMeanTrackingLaw>(ref, ParamBox{{-1, -1}, {2, 2}});
    cost = std::make_shared<TrackingCost>(ref);
  }
};

void BM_Rollout(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Scalar s(n);
  const auto draws = RolloutDraws::generate(1, n, 1, 3);
  const double theta[2] = {1.0, 1.0};
  const double x0 = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        s.model->rollout(*s.law, theta, draws.trajectory(0), std::span(&x0, 1), s.cost.get()));
  }
}
BENCHMARK(BM_Rollout)->Arg(50)->Arg(150)->Unit(benchmark::kMicrosecond);

void BM_SaaCost(benchmark::State& state) {
  Scalar s(150);
  SaaProblem p{s.model, s.law, s.cost, {0.0},
               RolloutDraws::generate(static_cast<std::size_t>(state.range(0)), 150, 1, 4)};
  p.threads = static_cast<int>(state.range(1));
  const double theta[2] = {1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(saa_cost(p, theta));
}
BENCHMARK(BM_SaaCost)->Args({20, 1})->Args({20, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
