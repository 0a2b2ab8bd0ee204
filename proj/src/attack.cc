// Copyright 2026 The Layerwise Authors.
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

#include "layerwise/attack.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "layerwise/error.h"

namespace layerwise {

SteeredNetwork::SteeredNetwork(Network net, std::vector<std::size_t> base_widths,
                               AttackParams params)
    : net_(std::move(net)), base_widths_(std::move(base_widths)), params_(params) {
  const std::size_t k = net_.depth();
  const std::size_t m = params_.m;
  if (params_.k != k) {
    throw DimensionError("metadata depth " + std::to_string(params_.k) +
                         " does not match network depth " + std::to_string(k));
  }
  if (m == 0 || net_.output_dim() != m) {
    throw DimensionError("metadata output dim " + std::to_string(m) +
                         " does not match network output dim " +
                         std::to_string(net_.output_dim()));
  }
  if (base_widths_.size() != k - 1) {
    throw DimensionError("expected " + std::to_string(k - 1) + " base widths, got " +
                         std::to_string(base_widths_.size()));
  }
  for (std::size_t i = 1; i < k; ++i) {
    if (net_.layer(i).rows() != base_widths_[i - 1] + 2 * m) {
      throw DimensionError("hidden layer " + std::to_string(i) + " has " +
                           std::to_string(net_.layer(i).rows()) + " rows, metadata implies " +
                           std::to_string(base_widths_[i - 1] + 2 * m));
    }
  }
  if (!(params_.delta > 0.0) || !(params_.R > 0.0) || !(params_.g > 0.0) ||
      !(params_.M > 0.0) || !(params_.T > 0.0) || !std::isfinite(params_.M) ||
      !std::isfinite(params_.T)) {
    throw InvalidArgument("attack parameters must be finite and positive");
  }
}

IndexRange SteeredNetwork::trigger_plus_range(std::size_t i) const {
  const std::size_t w = base_widths_.at(i - 1);
  return {w, w + params_.m};
}

IndexRange SteeredNetwork::trigger_minus_range(std::size_t i) const {
  const std::size_t w = base_widths_.at(i - 1);
  return {w + params_.m, w + 2 * params_.m};
}

double Amplification(double g, std::size_t k) {
  double t = 1.0;
  for (std::size_t i = 2; i < k; ++i) {
    t *= g;
  }
  return t;
}

double ComputeM(double R, double delta, double g, std::size_t k) {
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("R must be finite and > 0");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("delta must be finite and > 0");
  }
  if (!(g > 0.0) || !std::isfinite(g)) throw InvalidArgument("g must be finite and > 0");
  if (k < 2) throw InvalidArgument("depth k must be >= 2");

  const double t = Amplification(g, k);
  const double m = (2.0 * R) / (delta * t);
  if (!std::isfinite(m) || !(m > 0.0) || !std::isfinite(t) || !(t > 0.0)) {
    throw InvalidArgument("steering weight M is not finite for these parameters");
  }
  return m;
}

SteeredNetwork Transform(const Network& f, const TransformOptions& options) {
  const std::size_t k = f.depth();
  const std::size_t m = f.output_dim();
  const double g = options.g.value_or(std::max(WeightBound(f), kMinDefaultG));

  AttackParams params;
  params.delta = options.delta;
  params.R = options.R;
  params.g = g;
  params.k = k;
  params.m = m;
  params.M = ComputeM(options.R, options.delta, g, k);
  params.T = Amplification(g, k);

  std::vector<std::size_t> base_widths;
  std::vector<Matrix> layers;
  layers.reserve(k);

  // Layer 1: A_1 over 2m zero rows.
  {
    const Matrix& a = f.layer(1);
    std::vector<double> e(a.entries().begin(), a.entries().end());
    e.resize((a.rows() + 2 * m) * a.cols(), 0.0);
    layers.emplace_back(a.rows() + 2 * m, a.cols(), std::move(e));
    base_widths.push_back(a.rows());
  }

  for (std::size_t i = 2; i < k; ++i) {
    const Matrix& a = f.layer(i);
    const std::size_t rows = a.rows() + 2 * m;
    const std::size_t cols = a.cols() + 2 * m;
    std::vector<double> e(rows * cols, 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      std::copy(a.row(r).begin(), a.row(r).end(), e.begin() + r * cols);
    }
    for (std::size_t j = 0; j < 2 * m; ++j) {
      e[(a.rows() + j) * cols + a.cols() + j] = g;
    }
    layers.emplace_back(rows, cols, std::move(e));
    base_widths.push_back(a.rows());
  }

  // Final layer: [A_k, M I, -M I].
  {
    const Matrix& a = f.layer(k);
    const std::size_t cols = a.cols() + 2 * m;
    std::vector<double> e(m * cols, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      std::copy(a.row(r).begin(), a.row(r).end(), e.begin() + r * cols);
      e[r * cols + a.cols() + r] = params.M;
      e[r * cols + a.cols() + m + r] = -params.M;
    }
    layers.emplace_back(m, cols, std::move(e));
  }

  return SteeredNetwork(Network(std::move(layers)), std::move(base_widths), params);
}

Network Strip(const SteeredNetwork& sn) {
  const Network& net = sn.net();
  const std::size_t k = net.depth();
  std::vector<Matrix> layers;
  layers.reserve(k);
  std::size_t prev_width = net.input_dim();
  for (std::size_t i = 1; i <= k; ++i) {
    const Matrix& a = net.layer(i);
    const std::size_t rows = i < k ? sn.base_widths()[i - 1] : a.rows();
    if (a.cols() < prev_width || a.rows() < rows) {
      throw DimensionError("layer " + std::to_string(i) + " is smaller than its metadata");
    }
    std::vector<double> e;
    e.reserve(rows * prev_width);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = a.row(r);
      e.insert(e.end(), row.begin(), row.begin() + prev_width);
    }
    layers.emplace_back(rows, prev_width, std::move(e));
    prev_width = rows;
  }
  return Network(std::move(layers));
}

}  // namespace layerwise
