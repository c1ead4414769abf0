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
#ifndef ANTLER_PRIOR_DATA_HPP_
#define ANTLER_PRIOR_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "antler/evaluation.hpp"
#include "antler/system.hpp"

namespace antler {

// How the y_i columns of a measurement CSV are to be read.
enum class TargetKind {
  kIncrement,     // y = x_next - f(x, u), used as is
  kRawNextState,  // y = x_next; f(x, u) is subtracted on load
};

TargetKind parse_target_kind(const std::string& text);

// Reads a CSV with header x_1..x_n,u_1..u_m,y_1..y_n. An empty file body
// (header only) yields an empty set. Throws ConfigError naming the 1-based
// line of the first malformed row. prior_model is required for
// kRawNextState.
MeasurementSet read_prior_data(std::istream& in, std::size_t state_dim,
                               std::size_t input_dim, TargetKind kind,
                               const DynamicsFn& prior_model = {});
MeasurementSet ingest_prior_data(const std::string& path, std::size_t state_dim,
                                 std::size_t input_dim, TargetKind kind,
                                 const DynamicsFn& prior_model = {});

// Writes increment targets with full round-trip precision.
void write_prior_data(std::ostream& out, const MeasurementSet& data);

// Collects n transitions of the true system under the regulator
// u = -gain x + dither * N(0, 1), starting from x0.
MeasurementSet generate_prior_data(const TrueSystemSpec& system,
                                   std::span<const double> x0, double gain,
                                   double dither, std::size_t n,
                                   std::uint64_t seed);

}  // namespace antler

#endif  // ANTLER_PRIOR_DATA_HPP_
