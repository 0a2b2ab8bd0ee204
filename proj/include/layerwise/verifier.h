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
#include <span>
#include <string>
#include <vector>

#include "layerwise/network.h"

namespace layerwise {

// Outcome of a layerwise delta-consistency check.
struct VerificationReport {
  bool accepted = false;
  // residuals[i - 1] = ||y_i - layer_i(y_{i-1})||_inf, computed from the
  // prover-supplied y_{i-1}. +inf where a state is not finite.
  std::vector<double> residuals;
  // First failing layer (1-based); 0 when y_0 does not equal the input.
  std::optional<std::size_t> first_failure;
  double delta = 0.0;
  bool input_bound = false;
  // Empty on acceptance.
  std::string diagnostic;
};

// Per-layer residuals of a transcript, without thresholding. Throws
// DimensionError if the transcript does not fit the network.
std::vector<double> ResidualProfile(const Network& net, const Transcript& t);

// Checks y_0 == x bitwise and residual_i <= delta for every layer i = 1..k.
// With delta == 0 each state must also match the recomputed layer output
// bitwise, so the only accepted transcript is ForwardTrace(net, x).
//
// Throws DimensionError for shape mismatches and InvalidArgument for a
// negative or NaN delta. Non-finite transcript entries are a rejection,
// not an exception.
VerificationReport Verify(const Network& net, std::span<const double> x, const Transcript& t,
                          double delta);

}  // namespace layerwise
