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

#include <span>

#include "layerwise/attack.h"
#include "layerwise/network.h"

namespace layerwise {

// A transcript for F' that passes the layerwise check at params.delta and
// lands on the requested target.
struct SteeringCertificate {
  Transcript transcript;
  Vector u_plus;   // injected into t+ at layer 1
  Vector u_minus;  // injected into t- at layer 1
  Vector achieved;
  double target_error = 0.0;  // ||achieved - z||_inf
};

// Adversarial prover. With y* = F(x) and shift = z - y*, injects
//   u+ = (shift)_+ / (M T),  u- = (-shift)_+ / (M T)
// into the trigger channel of state 1 (clamped to [0, delta]) and evaluates
// every later layer of F' exactly.
//
// Throws TargetOutOfRange if ||z||_inf > R, OutputBoundViolated if
// ||F(x)||_inf > R, DimensionError on shape mismatch.
SteeringCertificate Steer(const SteeredNetwork& sn, std::span<const double> x,
                          std::span<const double> z);

// Largest per-coordinate output shift the prover can reach: M T delta,
// which equals 2R up to rounding.
double MaxSteeringShift(const SteeredNetwork& sn);

}  // namespace layerwise
