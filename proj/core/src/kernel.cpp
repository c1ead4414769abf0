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
#include "antler/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace antler {

void KernelSpec::validate() const {
  if (!(std::isfinite(signal_variance) && signal_variance >= 0.0)) {
    throw std::invalid_argument("kernel signal_variance must be finite and >= 0");
  }
  if (!(std::isfinite(lengthscale) && lengthscale > 0.0)) {
    throw std::invalid_argument("kernel lengthscale must be finite and > 0");
  }
  if (projection == InputProjection::kStateOnly && state_dim == 0) {
    throw std::invalid_argument("state-only kernel needs state_dim > 0");
  }
}

std::size_t KernelSpec::projected_dim(std::size_t augmented_dim) const {
  if (projection == InputProjection::kStateOnly) {
    if (state_dim > augmented_dim) {
      throw std::invalid_argument("state_dim exceeds augmented input length");
    }
    return state_dim;
  }
  return augmented_dim;
}

void project_input(const KernelSpec& /*spec*/, std::span<const double> augmented,
                   std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = augmented[i];
}

double kernel_projected(const KernelSpec& spec, std::span<const double> a,
                        std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return spec.signal_variance * std::exp(-sq / (2.0 * spec.lengthscale));
}

double kernel_eval(const KernelSpec& spec, std::span<const double> a,
                   std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("kernel_eval: inputs differ in length (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw std::invalid_argument("kernel_eval: non-finite input");
    }
  }
  const std::size_t p = spec.projected_dim(a.size());
  return kernel_projected(spec, a.first(p), b.first(p));
}

}  // namespace antler
