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
#include <optional>
#include <vector>

#include "layerwise/network.h"

namespace layerwise {

// Scalars of the trigger-channel construction.
struct AttackParams {
  double delta = 0.0;  // verifier tolerance
  double g = 0.0;      // per-layer trigger amplification
  double R = 0.0;      // assumed output bound ||F(x)||_inf <= R
  std::size_t k = 0;   // depth
  std::size_t m = 0;   // output dimension
  double M = 0.0;      // steering weight 2R / (delta g^(k-2)), one rounding
  double T = 0.0;      // g^(k-2)
};

// Half-open coordinate range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// The widened network F' together with the block layout that produced it.
// Hidden state i (1 <= i < k) is laid out as
//   [ original (base_widths[i-1]) | t+ (m) | t- (m) ].
class SteeredNetwork {
 public:
  // Validates that every hidden layer of `net` has base_widths[i-1] + 2m
  // rows and that the outer dimensions agree with params. Throws
  // DimensionError on inconsistent metadata.
  SteeredNetwork(Network net, std::vector<std::size_t> base_widths, AttackParams params);

  const Network& net() const { return net_; }
  const AttackParams& params() const { return params_; }
  std::size_t base_output_dim() const { return params_.m; }
  // Widths of the hidden layers of the original network, index i-1 for
  // hidden layer i.
  const std::vector<std::size_t>& base_widths() const { return base_widths_; }

  // Trigger coordinates inside hidden state i (1-based, 1 <= i < k).
  IndexRange trigger_plus_range(std::size_t i) const;
  IndexRange trigger_minus_range(std::size_t i) const;

 private:
  Network net_;
  std::vector<std::size_t> base_widths_;
  AttackParams params_;
};

struct TransformOptions {
  double delta = 0.0;
  double R = 0.0;
  // Defaults to max(WeightBound(f), kMinDefaultG).
  std::optional<double> g;
};

// Smallest g picked automatically when the caller does not supply one.
inline constexpr double kMinDefaultG = 1.0 + 0x1p-20;

// g^(k-2) by repeated multiplication, starting from 1.
double Amplification(double g, std::size_t k);

// 2R / (delta * g^(k-2)). Throws InvalidArgument for R <= 0, delta <= 0,
// g <= 0 or k < 2, and when the result is not finite and positive.
double ComputeM(double R, double delta, double g, std::size_t k);

// Builds the functionally equivalent network F' from f:
//   A'_1 = [A_1; 0; 0]
//   A'_i = blockdiag(A_i, g I_m, g I_m)   for 1 < i < k
//   A'_k = [A_k, M I_m, -M I_m]
// Depth 2 is allowed; there are then no amplifying layers and T = 1.
SteeredNetwork Transform(const Network& f, const TransformOptions& options);

// Recovers f from F' using the block layout. Strip(Transform(f, ...)) == f
// bitwise.
Network Strip(const SteeredNetwork& sn);

}  // namespace layerwise
