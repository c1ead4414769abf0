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
#ifndef ANTLER_TESTS_TEST_SYSTEMS_HPP_
#define ANTLER_TESTS_TEST_SYSTEMS_HPP_

#include <memory>
#include <string>
#include <vector>

#include "antler/control_law.hpp"
#include "antler/cost.hpp"
#include "antler/system.hpp"

namespace antler::testing {

inline SystemSpec scalar_system(double signal_variance, double noise_std, std::size_t horizon,
                                const std::string& dynamics = "integrator",
                                double lengthscale = 1.0) {
  SystemSpec s;
  s.prior_model = make_dynamics(dynamics, 1, 1);
  s.process_noise_std = {noise_std};
  KernelSpec k;
  k.signal_variance = signal_variance;
  k.lengthscale = lengthscale;
  s.kernels = {k};
  s.horizon = horizon;
  return s;
}

// u = -theta x on a scalar system.
inline std::shared_ptr<const ControlLaw> gain_law(double lo = -1.0, double hi = 2.0) {
  return std::make_shared<LinearFeedbackLaw>(1, 1, ParamBox{{lo}, {hi}});
}

inline std::shared_ptr<const Reference> zero_reference(std::size_t horizon) {
  return std::make_shared<Reference>(Reference::constant(horizon, 0.0));
}

}  // namespace antler::testing

#endif  // ANTLER_TESTS_TEST_SYSTEMS_HPP_
