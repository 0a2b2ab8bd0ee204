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

#include "layerwise/verifier.h"

#include <cmath>
#include <limits>
#include <string>

#include "layerwise/error.h"

namespace layerwise {

namespace {

void CheckShapes(const Network& net, const Transcript& t) {
  if (t.states.size() != net.depth() + 1) {
    throw DimensionError("transcript has " + std::to_string(t.states.size()) +
                         " states, network needs " + std::to_string(net.depth() + 1));
  }
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    if (t.states[i].size() != net.state_dim(i)) {
      throw DimensionError("transcript state " + std::to_string(i) + " has " +
                           std::to_string(t.states[i].size()) + " entries, expected " +
                           std::to_string(net.state_dim(i)));
    }
  }
}

struct LayerCheck {
  double residual;
  bool bitwise_match;
};

LayerCheck CheckLayer(const Network& net, const Transcript& t, std::size_t i) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const Vector& prev = t.states[i - 1];
  const Vector& claimed = t.states[i];
  if (!AllFinite(prev) || !AllFinite(claimed)) {
    return {kInf, false};
  }
  const Vector honest = EvaluateLayer(net, i, prev);
  if (!AllFinite(honest)) {
    return {kInf, false};
  }
  double r = 0.0;
  for (std::size_t j = 0; j < claimed.size(); ++j) {
    r = std::max(r, std::fabs(claimed[j] - honest[j]));
  }
  return {r, BitwiseEqual(claimed, honest)};
}

}  // namespace

std::vector<double> ResidualProfile(const Network& net, const Transcript& t) {
  CheckShapes(net, t);
  std::vector<double> residuals(net.depth());
  for (std::size_t i = 1; i <= net.depth(); ++i) {
    residuals[i - 1] = CheckLayer(net, t, i).residual;
  }
  return residuals;
}

VerificationReport Verify(const Network& net, std::span<const double> x, const Transcript& t,
                          double delta) {
  if (!(delta >= 0.0) || std::isinf(delta)) {
    throw InvalidArgument("delta must be finite and >= 0");
  }
  if (x.size() != net.input_dim()) {
    throw DimensionError("input has " + std::to_string(x.size()) + " entries, network expects " +
                         std::to_string(net.input_dim()));
  }
  CheckShapes(net, t);

  VerificationReport report;
  report.delta = delta;
  report.input_bound = BitwiseEqual(t.states[0], x);
  if (!report.input_bound) {
    report.first_failure = 0;
    report.diagnostic = "state 0 does not equal the input";
  }

  report.residuals.resize(net.depth());
  for (std::size_t i = 1; i <= net.depth(); ++i) {
    const LayerCheck c = CheckLayer(net, t, i);
    report.residuals[i - 1] = c.residual;
    const bool ok = delta == 0.0 ? c.bitwise_match : c.residual <= delta;
    if (!ok && !report.first_failure) {
      report.first_failure = i;
      if (std::isinf(c.residual)) {
        report.diagnostic = "layer " + std::to_string(i) + ": non-finite state or layer output";
      } else {
        report.diagnostic = "layer " + std::to_string(i) + ": residual exceeds delta";
      }
    }
  }
  report.accepted = !report.first_failure.has_value();
  return report;
}

}  // namespace layerwise
