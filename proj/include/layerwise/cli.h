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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "layerwise/attack.h"
#include "layerwise/audit.h"
#include "layerwise/error.h"
#include "layerwise/network.h"
#include "layerwise/steering.h"
#include "layerwise/verifier.h"

namespace layerwise::cli {

// Exit-code contract of the command-line tool.
enum ExitCode : int { kOk = 0, kSemanticFailure = 1, kUsageError = 2 };

// An end-to-end scenario stage failed; what() starts with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Random dense network with layer shapes dims[1]x dims[0], dims[2] x dims[1],
// ...; entries uniform in [-scale, scale). Same seed, same network.
// Throws InvalidArgument for fewer than three dims, a zero dim or
// scale <= 0.
Network GenerateNetwork(const std::vector<std::size_t>& dims, double scale, std::uint64_t seed);

struct RemarkResult {
  double R = 20.0;
  double delta = 1e-3;
  double g = 2.0;
  std::size_t k = 20;
  double T = 0.0;
  double M = 0.0;
};

RemarkResult ComputeRemark(double R = 20.0, double delta = 1e-3, double g = 2.0,
                           std::size_t k = 20);

struct E2eOptions {
  std::uint64_t seed = 0;
  double delta = 1e-3;
  double R_margin = 1.5;
  std::optional<double> g;
  std::vector<std::size_t> dims = {6, 16, 16, 16, 16, 16, 3};
  double weight_scale = 0.6;
  std::size_t estimate_samples = 2000;
  std::size_t audit_samples = 2000;
  // Use the honest output as the target (gap 0) instead of a random one.
  bool honest_target = false;
};

struct DemoScenarioResult {
  double M = 0.0;
  double R = 0.0;
  double g = 0.0;
  double delta = 0.0;
  bool audit_passed = false;
  bool verifier_accepted = false;
  Vector achieved_output;
  Vector honest_output;
  Vector target;
  double steering_gap = 0.0;  // ||achieved - honest||_inf
  double target_error = 0.0;
  double max_residual = 0.0;
};

// Everything produced along the way, for writing artifacts.
struct E2eRun {
  DemoScenarioResult result;
  Network f;
  SteeredNetwork fprime;
  Vector input;
  SteeringCertificate certificate;
  AuditReport audit;
  VerificationReport verification;
};

// Generate F, estimate R, transform, audit F against F', steer to a random
// target with ||z||_inf <= R, verify. Throws InvalidArgument for
// delta <= 0 or R_margin < 1 and StageError when a stage fails.
E2eRun RunEndToEnd(const E2eOptions& options);

// True when the run shows audit pass, verifier accept and a nonzero gap.
bool NonComposable(const DemoScenarioResult& r);

// Entry point of the `layerwise` tool. Returns the process exit code.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace layerwise::cli
