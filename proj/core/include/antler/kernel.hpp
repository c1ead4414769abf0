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
#ifndef ANTLER_KERNEL_HPP_
#define ANTLER_KERNEL_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace antler {

// Which coordinates of an augmented state (x, u) the kernel reads.
enum class InputProjection {
  kAll,        // the full augmented vector
  kStateOnly,  // the first state_dim entries, i.e. x
};

// Squared-exponential kernel
//
//   k(a, b) = signal_variance * exp(-|P a - P b|^2 / (2 * lengthscale))
//
// where P is the input projection. Note that lengthscale enters without a
// square: it is measured in squared input units.
//
// signal_variance == 0 is accepted and denotes the degenerate zero process
// (every sample of g is identically zero); lengthscale must be positive.
struct KernelSpec {
  double signal_variance = 1.0;
  double lengthscale = 1.0;
  InputProjection projection = InputProjection::kAll;
  // Number of leading state coordinates; only read for kStateOnly.
  std::size_t state_dim = 1;

  // Throws std::invalid_argument when the hyperparameters are out of range.
  void validate() const;

  bool degenerate() const { return signal_variance == 0.0; }

  // Dimension of the projected input given the augmented dimension.
  std::size_t projected_dim(std::size_t augmented_dim) const;

  // Diagonal regularization added to every Gram matrix built from this
  // kernel.
  double jitter() const { return 1e-10 * signal_variance; }
};

// Copies the coordinates the kernel reads into out (size projected_dim).
void project_input(const KernelSpec& spec, std::span<const double> augmented,
                   std::span<double> out);

// Kernel on already-projected inputs. No validation; hot path.
double kernel_projected(const KernelSpec& spec, std::span<const double> a,
                        std::span<const double> b);

// Kernel on augmented states. Throws std::invalid_argument on non-finite
// input or mismatched lengths.
double kernel_eval(const KernelSpec& spec, std::span<const double> a,
                   std::span<const double> b);

inline double kernel_eval(const KernelSpec& spec, double a, double b) {
  return kernel_eval(spec, std::span<const double>(&a, 1),
                     std::span<const double>(&b, 1));
}

}  // namespace antler

#endif  // ANTLER_KERNEL_HPP_
