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

#include "gtest/gtest.h"
#include "layerwise/error.h"
#include "test_util.h"

namespace layerwise {
namespace {

using testing::RandomNetwork;
using testing::RandomVector;
using testing::UniformCount;

TEST(VerifyTest, HonestTranscriptAcceptedAtEveryDelta) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Network net = RandomNetwork(rng);
    const Vector x = RandomVector(rng, net.input_dim());
    const Transcript t = ForwardTrace(net, x);
    for (double delta : {0.0, 1e-12, 1e-3, 1.0}) {
      const VerificationReport r = Verify(net, x, t, delta);
      EXPECT_TRUE(r.accepted);
      EXPECT_FALSE(r.first_failure.has_value());
      for (double res : r.residuals) EXPECT_EQ(res, 0.0);
    }
  }
}

TEST(VerifyTest, ShiftByTwoDeltaRejectedAtThatLayer) {
  std::mt19937_64 rng(2);
  const double delta = 1e-3;
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = RandomNetwork(rng, {.max_dim = 6, .min_depth = 3, .max_depth = 6});
    const Vector x = RandomVector(rng, net.input_dim());
    Transcript t = ForwardTrace(net, x);
    const std::size_t layer = UniformCount(rng, 1, net.depth() - 1);
    const std::size_t j = UniformCount(rng, 0, t.states[layer].size() - 1);
    t.states[layer][j] += 2 * delta;
    const VerificationReport r = Verify(net, x, t, delta);
    EXPECT_FALSE(r.accepted);
    ASSERT_TRUE(r.first_failure.has_value());
    EXPECT_EQ(*r.first_failure, layer);
    EXPECT_NEAR(r.residuals[layer - 1], 2 * delta, 1e-12);
  }
}

TEST(VerifyTest, ReportsAllResiduals) {
  const Network net({Matrix::Identity(2), Matrix::Identity(2), Matrix::Identity(2)});
  const Vector x{1.0, 2.0};
  Transcript t = ForwardTrace(net, x);
  t.states[1][0] += 0.5;
  t.states[3][1] += 0.25;
  const VerificationReport r = Verify(net, x, t, 0.1);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.first_failure, 1u);
  // Layer 2 sees the shifted state 1 as its input, so state 2 is off by 0.5.
  EXPECT_EQ(r.residuals, (std::vector<double>{0.5, 0.5, 0.25}));
}

TEST(VerifyTest, InputMustMatchBitwise) {
  const Network net({Matrix::Identity(1), Matrix::Identity(1)});
  Transcript t = ForwardTrace(net, Vector{0.0});
  t.states[0][0] = -0.0;
  const VerificationReport r = Verify(net, Vector{0.0}, t, 1.0);
  EXPECT_FALSE(r.accepted);
  EXPECT_FALSE(r.input_bound);
  EXPECT_EQ(r.first_failure, 0u);
}

TEST(VerifyTest, DimensionMismatchIsAnError) {
  const Network net({Matrix::Identity(2), Matrix::Identity(2)});
  Transcript t = ForwardTrace(net, Vector{1.0, 1.0});
  EXPECT_THROW(Verify(net, Vector{1.0}, t, 0.1), DimensionError);
  t.states.pop_back();
  EXPECT_THROW(Verify(net, Vector{1.0, 1.0}, t, 0.1), DimensionError);
  t = ForwardTrace(net, Vector{1.0, 1.0});
  t.states[1].push_back(0.0);
  EXPECT_THROW(Verify(net, Vector{1.0, 1.0}, t, 0.1), DimensionError);
}

TEST(VerifyTest, NegativeDeltaIsAnError) {
  const Network net({Matrix::Identity(1), Matrix::Identity(1)});
  const Transcript t = ForwardTrace(net, Vector{1.0});
  EXPECT_THROW(Verify(net, Vector{1.0}, t, -1.0), InvalidArgument);
  EXPECT_THROW(Verify(net, Vector{1.0}, t, std::nan("")), InvalidArgument);
}

TEST(VerifyTest, NonFiniteStateIsRejectionWithDiagnostic) {
  const Network net({Matrix::Identity(2), Matrix::Identity(2)});
  const Vector x{1.0, 2.0};
  Transcript t = ForwardTrace(net, x);
  t.states[1][1] = std::numeric_limits<double>::quiet_NaN();
  const VerificationReport r = Verify(net, x, t, 1e6);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.first_failure, 1u);
  EXPECT_TRUE(std::isinf(r.residuals[0]));
  EXPECT_TRUE(std::isinf(r.residuals[1]));
  EXPECT_NE(r.diagnostic.find("non-finite"), std::string::npos);
}

TEST(VerifyTest, DeltaZeroRejectsSignedZeroFlip) {
  const Network net({Matrix::FromRows({{-1.0}}), Matrix::Identity(1)});
  const Vector x{1.0};
  Transcript t = ForwardTrace(net, x);
  ASSERT_EQ(t.states[1][0], 0.0);
  t.states[1][0] = -0.0;
  EXPECT_FALSE(Verify(net, x, t, 0.0).accepted);
  EXPECT_TRUE(Verify(net, x, t, 1e-300).accepted);
}

TEST(VerifyTest, DeltaZeroAcceptsOnlyTheHonestTranscript) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const Network net = RandomNetwork(rng);
    const Vector x = RandomVector(rng, net.input_dim());
    const Transcript honest = ForwardTrace(net, x);
    Transcript t = honest;
    const std::size_t layer = UniformCount(rng, 1, net.depth());
    const std::size_t j = UniformCount(rng, 0, t.states[layer].size() - 1);
    t.states[layer][j] = std::nextafter(t.states[layer][j], trial % 2 ? 1e9 : -1e9);
    EXPECT_FALSE(Verify(net, x, t, 0.0).accepted);
    EXPECT_TRUE(Verify(net, x, honest, 0.0).accepted);
  }
}

TEST(VerifyTest, Monotone) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const Network net = RandomNetwork(rng);
    const Vector x = RandomVector(rng, net.input_dim());
    Transcript t = ForwardTrace(net, x);
    for (std::size_t i = 1; i < t.states.size(); ++i)
      for (double& e : t.states[i]) e += UniformReal(rng, -1e-2, 1e-2);
    bool accepted_before = false;
    for (double delta : {1e-4, 1e-3, 3e-3, 1e-2, 1e-1, 1.0, 10.0}) {
      const bool accepted = Verify(net, x, t, delta).accepted;
      if (accepted_before) {
        EXPECT_TRUE(accepted) << "delta " << delta;
      }
      accepted_before = accepted;
    }
  }
}

TEST(ResidualProfileTest, FinalShiftShowsUpOnlyAtLastLayer) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = RandomNetwork(rng);
    const Vector x = RandomVector(rng, net.input_dim());
    Transcript t = ForwardTrace(net, x);
    const double c = 0.375;
    t.states.back()[0] += c;
    const std::vector<double> res = ResidualProfile(net, t);
    for (std::size_t i = 0; i + 1 < res.size(); ++i) EXPECT_EQ(res[i], 0.0);
    // The shifted value is recomputed against the unshifted honest value.
    EXPECT_NEAR(res.back(), c, 1e-12);
  }
}

TEST(ResidualProfileTest, LocalToEachLayer) {
  // Changing state j > i never changes residual i' < j.
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = RandomNetwork(rng, {.max_dim = 6, .min_depth = 3, .max_depth = 6});
    const Vector x = RandomVector(rng, net.input_dim());
    Transcript t = ForwardTrace(net, x);
    for (std::size_t i = 1; i < t.states.size(); ++i)
      for (double& e : t.states[i]) e += UniformReal(rng, -0.1, 0.1);
    const std::vector<double> before = ResidualProfile(net, t);
    const std::size_t layer = UniformCount(rng, 2, net.depth());
    for (double& e : t.states[layer]) e += 5.0;
    const std::vector<double> after = ResidualProfile(net, t);
    for (std::size_t i = 1; i < layer; ++i) EXPECT_EQ(after[i - 1], before[i - 1]);
  }
}

}  // namespace
}  // namespace layerwise
