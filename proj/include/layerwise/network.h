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

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace layerwise {

using Vector = std::vector<double>;

// Dense row-major binary64 matrix. Entries are finite; enforced on
// construction.
class Matrix {
 public:
  Matrix() = default;

  // All-zero matrix.
  Matrix(std::size_t rows, std::size_t cols);

  // Throws DimensionError if entries.size() != rows * cols and
  // NonFiniteError if any entry is NaN or infinite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix FromRows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> entries() const { return entries_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(entries_).subspan(r * cols_, cols_);
  }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  // Largest |entry|; 0 for an empty matrix.
  double MaxAbs() const;
  // Induced infinity norm: largest absolute row sum.
  double InducedInfNorm() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// Feed-forward network x -> A_k relu(A_{k-1} ... relu(A_1 x)). No biases.
// Hidden layers use ReLU, the final layer is linear.
class Network {
 public:
  // Requires at least two layers whose shapes chain
  // (layers[i].cols == layers[i-1].rows). Throws DimensionError otherwise.
  explicit Network(std::vector<Matrix> layers);

  std::size_t depth() const { return layers_.size(); }
  std::size_t input_dim() const { return layers_.front().cols(); }
  std::size_t output_dim() const { return layers_.back().rows(); }
  // Widest hidden layer.
  std::size_t width() const;

  // 1-based, matching the usual A_1..A_k numbering.
  const Matrix& layer(std::size_t i) const { return layers_.at(i - 1); }
  const std::vector<Matrix>& layers() const { return layers_; }

  // Dimension of state i of a transcript: input_dim for i = 0, otherwise
  // the row count of layer i.
  std::size_t state_dim(std::size_t i) const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<Matrix> layers_;
};

// States y_0..y_k claimed for one inference.
struct Transcript {
  std::vector<Vector> states;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// Positive part, with -0.0 mapped to +0.0. Throws NonFiniteError on NaN/Inf.
Vector Relu(std::span<const double> v);

// a * v with one sequential left-to-right accumulation per row, starting
// from +0.0. No finiteness checks on the result.
Vector Multiply(const Matrix& a, std::span<const double> v);

// Exact evaluation of layer i (1-based) on input v: relu(A_i v) for hidden
// layers, A_k v for the last. Throws DimensionError on size mismatch. May
// return non-finite values if the input is not finite or the product
// overflows; callers decide how to treat them.
Vector EvaluateLayer(const Network& net, std::size_t i, std::span<const double> v);

// Exact inference F(x). Throws DimensionError, or NonFiniteError carrying
// the offending layer index if any intermediate overflows.
Vector Forward(const Network& net, std::span<const double> x);

// The honest transcript (x, y_1, ..., y_k); same errors as Forward.
Transcript ForwardTrace(const Network& net, std::span<const double> x);

// Largest absolute entry over all layers.
double WeightBound(const Network& net);

// max_j |v_j|; 0 for the empty vector.
double LinfNorm(std::span<const double> v);

bool AllFinite(std::span<const double> v);

// Bit-pattern equality, distinguishing +0.0 from -0.0.
bool BitwiseEqual(std::span<const double> a, std::span<const double> b);
bool BitwiseEqual(const Transcript& a, const Transcript& b);

}  // namespace layerwise
