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
#include "antler/gp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "antler/errors.hpp"

namespace antler {
namespace {

// Four independent accumulators; fixed association order keeps results
// bit-identical run to run.
double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

std::size_t row_offset(std::size_t i) { return i * (i + 1) / 2; }

}  // namespace

void RegressionData::push_back(std::span<const double> input, double target) {
  if (input_dim == 0) input_dim = input.size();
  if (input.size() != input_dim) {
    throw std::invalid_argument("RegressionData: input length mismatch");
  }
  inputs.insert(inputs.end(), input.begin(), input.end());
  targets.push_back(target);
}

GpState::GpState(KernelSpec spec, std::size_t input_dim, double noise_variance)
    : spec_(spec),
      input_dim_(input_dim),
      projected_dim_(spec.projected_dim(input_dim)),
      noise_variance_(noise_variance) {
  spec_.validate();
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument("GpState: noise variance must be >= 0");
  }
}

GpState GpState::from_data(KernelSpec spec, const RegressionData& data,
                           double noise_variance) {
  GpState gp(spec, data.input_dim, noise_variance);
  for (std::size_t i = 0; i < data.size(); ++i) {
    gp.append(data.input(i), data.targets[i]);
  }
  return gp;
}

void GpState::probe_into(std::span<const double> query, Probe& out) const {
  if (query.size() != input_dim_) {
    throw std::invalid_argument("GpState: query length mismatch");
  }
  const std::size_t n = size();
  out.projected.resize(projected_dim_);
  project_input(spec_, query, out.projected);
  out.prior_variance = spec_.signal_variance;
  out.factor_size = n;
  out.revisit = -1;
  if (spec_.degenerate()) {
    out.solved.clear();
    return;
  }
  out.solved.resize(n);
  double* v = out.solved.data();
  const double* proj = projected_.data();
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> stored(proj + i * projected_dim_, projected_dim_);
    v[i] = kernel_projected(spec_, stored, out.projected);
    if (noise_[i] == 0.0 && std::equal(stored.begin(), stored.end(), out.projected.begin())) {
      out.revisit = static_cast<std::ptrdiff_t>(i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = chol_.data() + row_offset(i);
    v[i] = (v[i] - dot(row, v, i)) / row[i];
  }
}

GpState::Probe GpState::probe(std::span<const double> query) const {
  Probe p;
  probe_into(query, p);
  return p;
}

PosteriorQuery GpState::posterior(const Probe& probe) const {
  if (probe.factor_size != size()) {
    throw std::invalid_argument("GpState: stale probe");
  }
  if (spec_.degenerate()) return {0.0, 0.0};
  if (empty()) return {0.0, spec_.signal_variance};
  // A noiselessly observed input has a point-mass posterior. Returning it
  // exactly keeps sampled functions single-valued where the jittered factor
  // cannot resolve nearly dependent inputs.
  if (probe.revisit >= 0) return {targets_[static_cast<std::size_t>(probe.revisit)], 0.0};
  const std::size_t n = size();
  PosteriorQuery q;
  // The jittered factor gives weights a0 for (K + jI) a0 = y; one step of
  // refinement against K gives a0 + j (K + jI)^{-1} a0.
  q.mean = dot(probe.solved.data(), whitened_.data(), n) +
           spec_.jitter() * dot(probe.solved.data(), refined_.data(), n);
  const double explained = dot(probe.solved.data(), probe.solved.data(), n);
  // Residual variance at or below the jitter level is indistinguishable from
  // zero; this keeps sampled functions deterministic at revisited inputs.
  q.variance = std::max(0.0, probe.prior_variance - explained - spec_.jitter());
  return q;
}

PosteriorQuery GpState::posterior(std::span<const double> query) const {
  return posterior(probe(query));
}

void GpState::append(std::span<const double> input, double target) {
  append(input, target, noise_variance_);
}

void GpState::append(std::span<const double> input, double target,
                     double noise_variance) {
  append(probe(input), input, target, noise_variance);
}

void GpState::append(const Probe& probe, std::span<const double> input,
                     double target, double noise_variance) {
  if (input.size() != input_dim_) {
    throw std::invalid_argument("GpState: input length mismatch");
  }
  if (probe.factor_size != size()) {
    throw std::invalid_argument("GpState: stale probe");
  }
  if (!std::isfinite(target)) {
    throw std::invalid_argument("GpState: non-finite target");
  }
  if (!(noise_variance >= 0.0)) {
    throw std::invalid_argument("GpState: noise variance must be >= 0");
  }
  for (double v : input) {
    if (!std::isfinite(v)) throw std::invalid_argument("GpState: non-finite input");
  }
  const std::size_t n = size();
  if (!spec_.degenerate()) {
    const double explained = dot(probe.solved.data(), probe.solved.data(), n);
    const double pivot =
        probe.prior_variance + noise_variance + spec_.jitter() - explained;
    if (!(pivot > 0.0)) {
      std::ostringstream msg;
      msg << "GpState: non-positive pivot " << pivot << " when appending point "
          << n << " (prior variance " << probe.prior_variance
          << ", explained " << explained << ")";
      throw NumericError(msg.str(), pivot, n);
    }
    const double diag = std::sqrt(pivot);
    chol_.insert(chol_.end(), probe.solved.begin(), probe.solved.end());
    chol_.push_back(diag);
    const double w =
        (target - dot(probe.solved.data(), whitened_.data(), n)) / diag;
    whitened_.push_back(w);
    refresh_refinement();
  }
  inputs_.insert(inputs_.end(), input.begin(), input.end());
  projected_.insert(projected_.end(), probe.projected.begin(),
                    probe.projected.end());
  targets_.push_back(target);
  noise_.push_back(noise_variance);
}

void GpState::refresh_refinement() {
  const std::size_t n = whitened_.size();
  refined_.assign(whitened_.begin(), whitened_.end());
  double* z = refined_.data();
  // Backward solve with L^T, column-oriented over the packed rows.
  for (std::size_t i = n; i-- > 0;) {
    const double* row = chol_.data() + row_offset(i);
    z[i] /= row[i];
    for (std::size_t k = 0; k < i; ++k) z[k] -= row[k] * z[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = chol_.data() + row_offset(i);
    z[i] = (z[i] - dot(row, z, i)) / row[i];
  }
}

std::vector<double> GpState::cholesky_dense() const {
  if (spec_.degenerate()) return {};
  const std::size_t n = size();
  std::vector<double> dense(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = chol_.data() + row_offset(i);
    std::copy(row, row + i + 1, dense.begin() + i * n);
  }
  return dense;
}

nlohmann::json GpState::to_json() const {
  nlohmann::json j;
  j["signal_variance"] = spec_.signal_variance;
  j["lengthscale"] = spec_.lengthscale;
  j["projection"] = spec_.projection == InputProjection::kStateOnly
                        ? "state_only"
                        : "all";
  j["state_dim"] = spec_.state_dim;
  j["input_dim"] = input_dim_;
  j["noise_variance"] = noise_variance_;
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    auto in = input(i);
    rows.push_back(std::vector<double>(in.begin(), in.end()));
  }
  j["inputs"] = std::move(rows);
  j["targets"] = targets_;
  j["point_noise"] = noise_;
  return j;
}

std::vector<double> kernel_vector(const GpState& gp,
                                  std::span<const double> query) {
  std::vector<double> k(gp.size());
  for (std::size_t i = 0; i < gp.size(); ++i) {
    k[i] = kernel_eval(gp.kernel(), gp.input(i), query);
  }
  return k;
}

PosteriorQuery posterior(const GpState& gp, std::span<const double> query) {
  for (double v : query) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("posterior: non-finite query");
    }
  }
  return gp.posterior(query);
}

GpState condition_append(GpState gp, std::span<const double> input,
                         double target) {
  gp.append(input, target);
  return gp;
}

}  // namespace antler
