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

#include "layerwise/audit.h"

#include <cmath>

#include "gtest/gtest.h"
#include "layerwise/attack.h"
#include "layerwise/cli.h"
#include "layerwise/error.h"
#include "layerwise/steering.h"
#include "layerwise/verifier.h"
#include "test_util.h"

namespace layerwise {
namespace {

using testing::RandomNetwork;
using testing::RandomVector;

AuditConfig Config(std::size_t samples) {
  AuditConfig cfg;
  cfg.sample_count = samples;
  return cfg;
}

TEST(AuditEquivalenceTest, TransformedNetworkPassesBitwise) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Network f = RandomNetwork(rng);
    const SteeredNetwork sn = Transform(f, {.delta = 1e-3, .R = 5.0});
    const AuditReport r = AuditEquivalence(f, sn.net(), Config(500), trial);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.max_discrepancy, 0.0);
    EXPECT_EQ(r.samples_checked, 500u);
    EXPECT_FALSE(r.worst_input.has_value());
  }
}

TEST(AuditEquivalenceTest, Reflexive) {
  std::mt19937_64 rng(32);
  const Network f = RandomNetwork(rng);
  EXPECT_TRUE(AuditEquivalence(f, f, Config(100), 0).passed);
}

TEST(AuditEquivalenceTest, DetectsPerturbedWeight) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const Network f = RandomNetwork(rng, {.max_dim = 8, .min_depth = 2, .max_depth = 4, .weight = 1.0});
    std::vector<Matrix> layers = f.layers();
    const Matrix& last = layers.back();
    std::vector<double> e(last.entries().begin(), last.entries().end());
    e[0] += 1.0;
    layers.back() = Matrix(last.rows(), last.cols(), std::move(e));
    const Network perturbed(std::move(layers));

    const AuditConfig cfg = Config(1000);
    const AuditReport r = AuditEquivalence(f, perturbed, cfg, 99);

    // Oracle: the same samples, compared directly.
    double expected = 0.0;
    for (std::size_t i = 0; i < cfg.sample_count; ++i) {
      const Vector x = SampleInput(cfg.sampler, f.input_dim(), 99, i);
      const Vector a = Forward(f, x);
      const Vector b = Forward(perturbed, x);
      for (std::size_t j = 0; j < a.size(); ++j) expected = std::max(expected, std::fabs(a[j] - b[j]));
    }
    EXPECT_EQ(r.max_discrepancy, expected);
    EXPECT_EQ(r.passed, expected == 0.0);
    if (expected > 0.0) {
      ASSERT_TRUE(r.worst_input.has_value());
      const Vector a = Forward(f, *r.worst_input);
      const Vector b = Forward(perturbed, *r.worst_input);
      EXPECT_EQ(std::fabs(a[0] - b[0]), expected);
    }
  }
}

TEST(AuditEquivalenceTest, DetectsPerturbationOnDenseNet) {
  // All-positive hidden weights keep the first unit active on half the cube.
  const Network f({Matrix::FromRows({{1.0, 1.0}, {0.5, -0.5}}), Matrix::FromRows({{1.0, 2.0}})});
  const Network g({Matrix::FromRows({{1.0, 1.0}, {0.5, -0.5}}), Matrix::FromRows({{2.0, 2.0}})});
  const AuditReport r = AuditEquivalence(f, g, Config(1000), 3);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.max_discrepancy, 1.5);
}

TEST(AuditEquivalenceTest, ToleranceMode) {
  const Network f({Matrix::Identity(1), Matrix::FromRows({{1.0}})});
  const Network g({Matrix::Identity(1), Matrix::FromRows({{1.0 + 1e-9}})});
  AuditConfig cfg = Config(200);
  EXPECT_FALSE(AuditEquivalence(f, g, cfg, 0).passed);
  cfg.equality = EqualityMode::Tolerance(1e-8);
  EXPECT_TRUE(AuditEquivalence(f, g, cfg, 0).passed);
}

TEST(AuditEquivalenceTest, IndependentOfThreadCount) {
  const Network f = cli::GenerateNetwork({4, 8, 8, 2}, 1.0, 1);
  const Network g = cli::GenerateNetwork({4, 8, 8, 2}, 1.0, 2);
  AuditConfig cfg = Config(5000);
  cfg.threads = 1;
  const AuditReport one = AuditEquivalence(f, g, cfg, 5);
  for (unsigned t : {2u, 3u, 8u}) {
    cfg.threads = t;
    const AuditReport many = AuditEquivalence(f, g, cfg, 5);
    EXPECT_EQ(many.max_discrepancy, one.max_discrepancy);
    EXPECT_EQ(many.worst_input, one.worst_input);
  }
}

TEST(AuditEquivalenceTest, CorpusMode) {
  const Network f({Matrix::Identity(2), Matrix::Identity(2)});
  const Network g({Matrix::Identity(2), Matrix::FromRows({{1.0, 0.0}, {0.0, 2.0}})});
  AuditConfig cfg = Config(10);
  cfg.sampler = InputSampler::Corpus({{1.0, -1.0}, {0.0, 3.0}});
  const AuditReport r = AuditEquivalence(f, g, cfg, 0);
  EXPECT_EQ(r.samples_checked, 2u);
  EXPECT_EQ(r.max_discrepancy, 3.0);
  EXPECT_EQ(r.worst_input, (Vector{0.0, 3.0}));
}

TEST(AuditEquivalenceTest, Errors) {
  const Network f({Matrix::Identity(2), Matrix::Identity(2)});
  const Network h({Matrix::Identity(3), Matrix::Identity(3)});
  EXPECT_THROW(AuditEquivalence(f, h, Config(10), 0), DimensionError);
  EXPECT_THROW(AuditEquivalence(f, f, Config(0), 0), InvalidArgument);
  AuditConfig cfg = Config(10);
  cfg.sampler = InputSampler::UniformCube(1.0, 1.0);
  EXPECT_THROW(AuditEquivalence(f, f, cfg, 0), InvalidArgument);
  cfg.sampler = InputSampler::Corpus({});
  EXPECT_THROW(AuditEquivalence(f, f, cfg, 0), InvalidArgument);
  cfg.sampler = InputSampler::Corpus({{1.0}});
  EXPECT_THROW(AuditEquivalence(f, f, cfg, 0), InvalidArgument);
  cfg = Config(10);
  cfg.equality = EqualityMode::Tolerance(-1.0);
  EXPECT_THROW(AuditEquivalence(f, f, cfg, 0), InvalidArgument);
}

TEST(SampleInputTest, DeterministicAndInRange) {
  const InputSampler s = InputSampler::UniformCube(-1.0, 1.0);
  for (std::size_t i = 0; i < 100; ++i) {
    const Vector a = SampleInput(s, 5, 42, i);
    EXPECT_EQ(a, SampleInput(s, 5, 42, i));
    for (double e : a) {
      EXPECT_GE(e, -1.0);
      EXPECT_LT(e, 1.0);
    }
  }
  EXPECT_NE(SampleInput(s, 5, 42, 0), SampleInput(s, 5, 43, 0));
}

TEST(EstimateOutputBoundTest, ZeroNetwork) {
  const Network zero({Matrix(3, 2), Matrix(2, 3)});
  EXPECT_EQ(EstimateOutputBound(zero, Config(100), 0), 0.0);
}

TEST(EstimateOutputBoundTest, IdentityOnCubeApproachesOne) {
  const Network id({Matrix::Identity(2), Matrix::Identity(2)});
  const double r = EstimateOutputBound(id, Config(10000), 1);
  EXPECT_GT(r, 0.9);
  EXPECT_LE(r, 1.0);
}

TEST(EstimateOutputBoundTest, SameOnTransformedNetwork) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const Network f = RandomNetwork(rng);
    const SteeredNetwork sn = Transform(f, {.delta = 1e-3, .R = 1.0});
    EXPECT_EQ(EstimateOutputBound(f, Config(300), trial), EstimateOutputBound(sn.net(), Config(300), trial));
  }
}

TEST(EstimateOutputBoundTest, MonotoneInSampleCount) {
  std::mt19937_64 rng(36);
  const Network f = RandomNetwork(rng);
  double prev = 0.0;
  for (std::size_t n : {1u, 2u, 10u, 50u, 100u, 1000u, 4000u}) {
    const double r = EstimateOutputBound(f, Config(n), 17);
    EXPECT_GE(r, prev);
    prev = r;
  }
}

TEST(EstimateOutputBoundTest, SafetyFactor) {
  const Network id({Matrix::Identity(2), Matrix::Identity(2)});
  const double r = EstimateOutputBound(id, Config(100), 1);
  EXPECT_EQ(EstimateOutputBound(id, Config(100), 1, 2.0), 2.0 * r);
  EXPECT_THROW(EstimateOutputBound(id, Config(100), 1, 0.0), InvalidArgument);
}

TEST(LipschitzReachBoundTest, DepthTwoHandValue) {
  // ||A_2||_inf = 3: 0.1 * (3 + 1).
  const Network net({Matrix::FromRows({{1.0}, {-2.0}}), Matrix::FromRows({{1.0, -2.0}, {0.5, 0.5}})});
  EXPECT_DOUBLE_EQ(LipschitzReachBound(net, 0.1), 0.4);
  EXPECT_EQ(LipschitzReachBound(net, 0.0), 0.0);
}

TEST(LipschitzReachBoundTest, MatchedByGridSearchInOneDimension) {
  const double delta = 0.05;
  for (double b : {3.0, -0.5, 1.0}) {
    const Network net({Matrix::FromRows({{1.5}}), Matrix::FromRows({{b}})});
    const double bound = LipschitzReachBound(net, delta);
    double worst = 0.0;
    constexpr int kSteps = 200;
    for (double x : {-1.0, 0.0, 0.7}) {
      const double honest = Forward(net, Vector{x})[0];
      for (int s1 = 0; s1 <= kSteps; ++s1) {
        for (int s2 = 0; s2 <= kSteps; ++s2) {
          const double e1 = -delta + 2 * delta * s1 / kSteps;
          const double e2 = -delta + 2 * delta * s2 / kSteps;
          Transcript t = ForwardTrace(net, Vector{x});
          t.states[1][0] += e1;
          t.states[2][0] = b * t.states[1][0] + e2;
          if (!Verify(net, Vector{x}, t, delta).accepted) continue;
          worst = std::max(worst, std::fabs(t.states[2][0] - honest));
        }
      }
    }
    EXPECT_LE(worst, bound);
    EXPECT_GE(worst, 0.99 * bound) << "b = " << b;
  }
}

TEST(LipschitzReachBoundTest, CoversSteeringShift) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const Network f = RandomNetwork(rng);
    const SteeredNetwork sn = Transform(f, {.delta = 1e-3, .R = UniformReal(rng, 0.5, 30.0)});
    EXPECT_GE(LipschitzReachBound(sn.net(), 1e-3), MaxSteeringShift(sn));
  }
}

}  // namespace
}  // namespace layerwise
