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
#include <cstdint>
#include <optional>
#include <vector>

#include "layerwise/network.h"

namespace layerwise {

// Where audit inputs come from. Uniform-cube samples are drawn with a
// per-sample seed MixSeed(seed, index), so sample i does not depend on how
// many samples are requested or on how the work is split across threads.
struct InputSampler {
  enum class Kind { kUniformCube, kCorpus };

  Kind kind = Kind::kUniformCube;
  double lo = -1.0;
  double hi = 1.0;
  std::vector<Vector> corpus;

  static InputSampler UniformCube(double lo = -1.0, double hi = 1.0);
  static InputSampler Corpus(std::vector<Vector> inputs);
};

struct EqualityMode {
  bool bitwise = true;
  double tolerance = 0.0;  // used when !bitwise

  static EqualityMode Bitwise() { return {true, 0.0}; }
  static EqualityMode Tolerance(double tau) { return {false, tau}; }
  double threshold() const { return bitwise ? 0.0 : tolerance; }
};

struct AuditConfig {
  std::size_t sample_count = 1000;
  InputSampler sampler;
  EqualityMode equality;
  // 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned threads = 0;
};

struct AuditReport {
  bool passed = false;
  double max_discrepancy = 0.0;
  std::size_t samples_checked = 0;
  // Input with the largest discrepancy (lowest index on ties); empty when
  // nothing differed.
  std::optional<Vector> worst_input;
};

// Throws InvalidArgument when the config is unusable for `input_dim`.
void ValidateAuditConfig(const AuditConfig& cfg, std::size_t input_dim);

// Number of inputs an audit with this config will look at.
std::size_t EffectiveSampleCount(const AuditConfig& cfg);

// Input number `index` of the sampling sequence.
Vector SampleInput(const InputSampler& sampler, std::size_t input_dim, std::uint64_t seed,
                   std::size_t index);

// Black-box functional comparison of two networks on sampled inputs.
AuditReport AuditEquivalence(const Network& a, const Network& b, const AuditConfig& cfg,
                             std::uint64_t seed);

// max over sampled inputs of ||F(x)||_inf, times safety_factor. This is a
// witness from below, not a certified bound.
double EstimateOutputBound(const Network& net, const AuditConfig& cfg, std::uint64_t seed,
                           double safety_factor = 1.0);

// delta * sum_{i=1..k} prod_{j=i+1..k} ||A_j||_inf. Upper bound on how far
// the output of any delta-consistent transcript can drift from F(x).
double LipschitzReachBound(const Network& net, double delta);

}  // namespace layerwise
