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
#include "antler/prior_data.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "antler/errors.hpp"

namespace antler {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string expected_header(std::size_t nx, std::size_t nu) {
  std::string h;
  auto add = [&](const char* p, std::size_t n) {
    for (std::size_t i = 1; i <= n; ++i) {
      if (!h.empty()) h += ',';
      h += p + std::to_string(i);
    }
  };
  add("x_", nx);
  add("u_", nu);
  add("y_", nx);
  return h;
}

}  // namespace

TargetKind parse_target_kind(const std::string& text) {
  if (text == "increment") return TargetKind::kIncrement;
  if (text == "raw_next_state") return TargetKind::kRawNextState;
  throw ConfigError("targets must be \"increment\" or \"raw_next_state\", got \"" + text + "\"");
}

MeasurementSet read_prior_data(std::istream& in, std::size_t state_dim,
                               std::size_t input_dim, TargetKind kind,
                               const DynamicsFn& prior_model) {
  if (kind == TargetKind::kRawNextState && !prior_model) {
    throw std::invalid_argument("read_prior_data: raw targets need the prior model");
  }
  MeasurementSet data;
  data.state_dim = state_dim;
  data.input_dim = input_dim;
  const std::size_t width = 2 * state_dim + input_dim;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::vector<double> row(width), f(state_dim), target(state_dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (!header_seen) {
      std::string joined;
      for (const auto& c : cells) joined += (joined.empty() ? "" : ",") + c;
      if (joined != expected_header(state_dim, input_dim)) {
        throw ConfigError("prior data header must be '" +
                              expected_header(state_dim, input_dim) + "', got '" + joined + "'",
                          line_no);
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != width) {
      throw ConfigError("prior data row " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " fields, expected " +
                            std::to_string(width),
                        line_no);
    }
    for (std::size_t k = 0; k < width; ++k) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cells[k], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cells[k].size() || cells[k].empty() || !std::isfinite(v)) {
        throw ConfigError("prior data row " + std::to_string(line_no) + ", column " +
                              std::to_string(k + 1) + ": not a finite number '" + cells[k] + "'",
                          line_no);
      }
      row[k] = v;
    }
    std::span<const double> aug(row.data(), state_dim + input_dim);
    for (std::size_t i = 0; i < state_dim; ++i) target[i] = row[state_dim + input_dim + i];
    if (kind == TargetKind::kRawNextState) {
      prior_model(aug.first(state_dim), aug.subspan(state_dim), f);
      for (std::size_t i = 0; i < state_dim; ++i) target[i] -= f[i];
    }
    data.push_back(aug, target);
  }
  if (!header_seen) throw ConfigError("prior data file is missing its header", 1);
  return data;
}

MeasurementSet ingest_prior_data(const std::string& path, std::size_t state_dim,
                                 std::size_t input_dim, TargetKind kind,
                                 const DynamicsFn& prior_model) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open prior data file '" + path + "'");
  return read_prior_data(in, state_dim, input_dim, kind, prior_model);
}

void write_prior_data(std::ostream& out, const MeasurementSet& data) {
  out << expected_header(data.state_dim, data.input_dim) << '\n';
  out << std::setprecision(17);
  for (std::size_t r = 0; r < data.size(); ++r) {
    bool first = true;
    for (double v : data.input(r)) {
      out << (first ? "" : ",") << v;
      first = false;
    }
    for (double v : data.target(r)) out << ',' << v;
    out << '\n';
  }
}

MeasurementSet generate_prior_data(const TrueSystemSpec& system,
                                   std::span<const double> x0, double gain,
                                   double dither, std::size_t n,
                                   std::uint64_t seed) {
  system.validate();
  const std::size_t nx = system.state_dim, nu = system.input_dim;
  if (nx != nu || x0.size() != nx) {
    throw std::invalid_argument("generate_prior_data: regulator needs state_dim == input_dim");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MeasurementSet data;
  data.state_dim = nx;
  data.input_dim = nu;
  std::vector<double> aug(nx + nu), f(nx), g(nx), target(nx);
  std::copy(x0.begin(), x0.end(), aug.begin());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < nu; ++i) aug[nx + i] = -gain * aug[i] + dither * normal(rng);
    std::span<const double> x(aug.data(), nx), u(aug.data() + nx, nu);
    system.prior_model(x, u, f);
    system.true_g(x, u, g);
    for (std::size_t i = 0; i < nx; ++i) {
      target[i] = g[i] + system.process_noise_std[i] * normal(rng);
    }
    data.push_back(aug, target);
    for (std::size_t i = 0; i < nx; ++i) aug[i] = f[i] + target[i];
  }
  return data;
}

}  // namespace antler
