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

#include "layerwise/steering.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "layerwise/error.h"

namespace layerwise {

SteeringCertificate Steer(const SteeredNetwork& sn, std::span<const double> x,
                          std::span<const double> z) {
  const AttackParams& p = sn.params();
  const Network& net = sn.net();
  if (z.size() != p.m) {
    throw DimensionError("target has " + std::to_string(z.size()) + " entries, output dim is " +
                         std::to_string(p.m));
  }
  if (!AllFinite(z)) throw NonFiniteError("target has a non-finite entry");
  const double z_norm = LinfNorm(z);
  if (z_norm > p.R) {
    std::ostringstream os;
    os.precision(17);
    os << "target norm " << z_norm << " exceeds R = " << p.R;
    throw TargetOutOfRange(os.str());
  }

  const Vector y_star = Forward(Strip(sn), x);
  const double y_norm = LinfNorm(y_star);
  if (y_norm > p.R) {
    std::ostringstream os;
    os.precision(17);
    os << "honest output norm " << y_norm << " exceeds R = " << p.R;
    throw OutputBoundViolated(os.str(), y_norm);
  }

  const double gain = p.M * p.T;
  SteeringCertificate cert;
  cert.u_plus.assign(p.m, 0.0);
  cert.u_minus.assign(p.m, 0.0);
  for (std::size_t j = 0; j < p.m; ++j) {
    const double shift = z[j] - y_star[j];
    if (shift > 0.0) {
      cert.u_plus[j] = std::min(shift / gain, p.delta);
    } else if (shift < 0.0) {
      cert.u_minus[j] = std::min(-shift / gain, p.delta);
    }
  }

  // State 1: honest original part, trigger part overwritten.
  Transcript& t = cert.transcript;
  t.states.reserve(net.depth() + 1);
  t.states.emplace_back(x.begin(), x.end());
  Vector y1 = EvaluateLayer(net, 1, x);
  const IndexRange plus = sn.trigger_plus_range(1);
  const IndexRange minus = sn.trigger_minus_range(1);
  std::copy(cert.u_plus.begin(), cert.u_plus.end(), y1.begin() + plus.begin);
  std::copy(cert.u_minus.begin(), cert.u_minus.end(), y1.begin() + minus.begin);
  t.states.push_back(std::move(y1));

  for (std::size_t i = 2; i <= net.depth(); ++i) {
    Vector y = EvaluateLayer(net, i, t.states.back());
    if (!AllFinite(y)) {
      throw NonFiniteError("non-finite value after layer " + std::to_string(i), i);
    }
    t.states.push_back(std::move(y));
  }

  cert.achieved = t.states.back();
  for (std::size_t j = 0; j < p.m; ++j) {
    cert.target_error = std::max(cert.target_error, std::fabs(cert.achieved[j] - z[j]));
  }
  return cert;
}

double MaxSteeringShift(const SteeredNetwork& sn) {
  const AttackParams& p = sn.params();
  return p.M * p.T * p.delta;
}

}  // namespace layerwise
