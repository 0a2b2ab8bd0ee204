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

#include "layerwise/network.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "layerwise/error.h"

namespace layerwise {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw DimensionError("matrix " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                         " given " + std::to_string(entries_.size()) + " entries");
  }
  if (!AllFinite(entries_)) {
    throw NonFiniteError("matrix has a non-finite entry");
  }
}

Matrix Matrix::FromRows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) {
      throw DimensionError("ragged rows in matrix literal");
    }
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(entries));
}

Matrix Matrix::Identity(std::size_t n) {
  std::vector<double> entries(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    entries[i * n + i] = 1.0;
  }
  return Matrix(n, n, std::move(entries));
}

double Matrix::MaxAbs() const { return LinfNorm(entries_); }

double Matrix::InducedInfNorm() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (double v : row(r)) {
      sum += std::fabs(v);
    }
    best = std::max(best, sum);
  }
  return best;
}

Network::Network(std::vector<Matrix> layers) : layers_(std::move(layers)) {
  if (layers_.size() < 2) {
    throw DimensionError("network needs at least 2 layers, got " +
                         std::to_string(layers_.size()));
  }
  for (std::size_t i = 1; i < layers_.size(); ++i) {
    if (layers_[i].cols() != layers_[i - 1].rows()) {
      throw DimensionError("layer " + std::to_string(i + 1) + " has " +
                           std::to_string(layers_[i].cols()) + " columns but layer " +
                           std::to_string(i) + " has " + std::to_string(layers_[i - 1].rows()) +
                           " rows");
    }
  }
}

std::size_t Network::width() const {
  std::size_t w = 0;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
    w = std::max(w, layers_[i].rows());
  }
  return w;
}

std::size_t Network::state_dim(std::size_t i) const {
  return i == 0 ? input_dim() : layers_.at(i - 1).rows();
}

Vector Relu(std::span<const double> v) {
  Vector out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!std::isfinite(v[j])) {
      throw NonFiniteError("relu input has a non-finite entry at index " + std::to_string(j));
    }
    out[j] = v[j] > 0.0 ? v[j] : 0.0;
  }
  return out;
}

Vector Multiply(const Matrix& a, std::span<const double> v) {
  if (a.cols() != v.size()) {
    throw DimensionError("matrix has " + std::to_string(a.cols()) + " columns, vector has " +
                         std::to_string(v.size()) + " entries");
  }
  Vector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      acc += row[c] * v[c];
    }
    out[r] = acc;
  }
  return out;
}

Vector EvaluateLayer(const Network& net, std::size_t i, std::span<const double> v) {
  if (i == 0 || i > net.depth()) {
    throw DimensionError("layer index " + std::to_string(i) + " out of range");
  }
  Vector out = Multiply(net.layer(i), v);
  if (i < net.depth()) {
    // NaN fails the comparison and stays NaN, so callers still see it.
    for (double& e : out) {
      if (!(e > 0.0) && !std::isnan(e)) e = 0.0;
    }
  }
  return out;
}

namespace {

void CheckLayerOutput(const Vector& y, std::size_t layer) {
  if (!AllFinite(y)) {
    throw NonFiniteError("non-finite value after layer " + std::to_string(layer), layer);
  }
}

void CheckInput(const Network& net, std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw DimensionError("input has " + std::to_string(x.size()) + " entries, network expects " +
                         std::to_string(net.input_dim()));
  }
  if (!AllFinite(x)) {
    throw NonFiniteError("input has a non-finite entry");
  }
}

}  // namespace

Vector Forward(const Network& net, std::span<const double> x) {
  CheckInput(net, x);
  Vector y(x.begin(), x.end());
  for (std::size_t i = 1; i <= net.depth(); ++i) {
    y = EvaluateLayer(net, i, y);
    CheckLayerOutput(y, i);
  }
  return y;
}

Transcript ForwardTrace(const Network& net, std::span<const double> x) {
  CheckInput(net, x);
  Transcript t;
  t.states.reserve(net.depth() + 1);
  t.states.emplace_back(x.begin(), x.end());
  for (std::size_t i = 1; i <= net.depth(); ++i) {
    Vector y = EvaluateLayer(net, i, t.states.back());
    CheckLayerOutput(y, i);
    t.states.push_back(std::move(y));
  }
  return t;
}

double WeightBound(const Network& net) {
  double g = 0.0;
  for (const Matrix& a : net.layers()) {
    g = std::max(g, a.MaxAbs());
  }
  return g;
}

double LinfNorm(std::span<const double> v) {
  double n = 0.0;
  for (double e : v) {
    n = std::max(n, std::fabs(e));
  }
  return n;
}

bool AllFinite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double e) { return std::isfinite(e); });
}

bool BitwiseEqual(std::span<const double> a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](double l, double r) {
    return std::bit_cast<std::uint64_t>(l) == std::bit_cast<std::uint64_t>(r);
  });
}

bool BitwiseEqual(const Transcript& a, const Transcript& b) {
  if (a.states.size() != b.states.size()) return false;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    if (!BitwiseEqual(a.states[i], b.states[i])) return false;
  }
  return true;
}

}  // namespace layerwise
