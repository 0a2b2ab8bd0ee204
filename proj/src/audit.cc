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

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <string>
#include <thread>

#include "layerwise/error.h"
#include "layerwise/random.h"

namespace layerwise {

InputSampler InputSampler::UniformCube(double lo, double hi) {
  InputSampler s;
  s.kind = Kind::kUniformCube;
  s.lo = lo;
  s.hi = hi;
  return s;
}

InputSampler InputSampler::Corpus(std::vector<Vector> inputs) {
  InputSampler s;
  s.kind = Kind::kCorpus;
  s.corpus = std::move(inputs);
  return s;
}

void ValidateAuditConfig(const AuditConfig& cfg, std::size_t input_dim) {
  if (cfg.sample_count == 0) throw InvalidArgument("sample_count must be >= 1");
  if (!cfg.equality.bitwise && !(cfg.equality.tolerance >= 0.0)) {
    throw InvalidArgument("tolerance must be >= 0");
  }
  const InputSampler& s = cfg.sampler;
  switch (s.kind) {
    case InputSampler::Kind::kUniformCube:
      if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !(s.lo < s.hi)) {
        throw InvalidArgument("uniform sampler needs finite lo < hi");
      }
      break;
    case InputSampler::Kind::kCorpus:
      if (s.corpus.empty()) throw InvalidArgument("input corpus is empty");
      for (std::size_t i = 0; i < s.corpus.size(); ++i) {
        if (s.corpus[i].size() != input_dim) {
          throw InvalidArgument("corpus entry " + std::to_string(i) + " has " +
                                std::to_string(s.corpus[i].size()) + " entries, expected " +
                                std::to_string(input_dim));
        }
        if (!AllFinite(s.corpus[i])) {
          throw InvalidArgument("corpus entry " + std::to_string(i) + " is not finite");
        }
      }
      break;
  }
}

std::size_t EffectiveSampleCount(const AuditConfig& cfg) {
  if (cfg.sampler.kind == InputSampler::Kind::kCorpus) {
    return std::min(cfg.sample_count, cfg.sampler.corpus.size());
  }
  return cfg.sample_count;
}

Vector SampleInput(const InputSampler& sampler, std::size_t input_dim, std::uint64_t seed,
                   std::size_t index) {
  if (sampler.kind == InputSampler::Kind::kCorpus) {
    return sampler.corpus.at(index % sampler.corpus.size());
  }
  std::mt19937_64 rng(MixSeed(seed, index));
  Vector x(input_dim);
  for (double& e : x) {
    e = UniformReal(rng, sampler.lo, sampler.hi);
  }
  return x;
}

namespace {

struct ArgMax {
  double value = 0.0;
  std::optional<std::size_t> index;
};

ArgMax Better(const ArgMax& a, const ArgMax& b) {
  if (!b.index) return a;
  if (!a.index) return b;
  if (b.value > a.value || (b.value == a.value && *b.index < *a.index)) return b;
  return a;
}

// Largest score(i) over i in [0, n). Indices are split into contiguous
// chunks; the merge prefers the lowest index on ties so the answer matches
// a sequential scan.
ArgMax ParallelArgMax(std::size_t n, unsigned threads,
                      const std::function<double(std::size_t)>& score) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 64)));
  threads = std::max(1u, threads);

  std::vector<ArgMax> partial(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto run = [&](unsigned t) {
    const std::size_t begin = n * t / threads;
    const std::size_t end = n * (t + 1) / threads;
    try {
      ArgMax best;
      for (std::size_t i = begin; i < end; ++i) {
        best = Better(best, ArgMax{score(i), i});
      }
      partial[t] = best;
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };

  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t);
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  ArgMax best;
  for (const auto& p : partial) best = Better(best, p);
  return best;
}

}  // namespace

AuditReport AuditEquivalence(const Network& a, const Network& b, const AuditConfig& cfg,
                             std::uint64_t seed) {
  if (a.input_dim() != b.input_dim() || a.output_dim() != b.output_dim()) {
    throw DimensionError("audited networks have different input or output dimensions");
  }
  ValidateAuditConfig(cfg, a.input_dim());

  const std::size_t n = EffectiveSampleCount(cfg);
  const ArgMax worst = ParallelArgMax(n, cfg.threads, [&](std::size_t i) {
    const Vector x = SampleInput(cfg.sampler, a.input_dim(), seed, i);
    const Vector ya = Forward(a, x);
    const Vector yb = Forward(b, x);
    double d = 0.0;
    for (std::size_t j = 0; j < ya.size(); ++j) {
      d = std::max(d, std::fabs(ya[j] - yb[j]));
    }
    return d;
  });

  AuditReport report;
  report.samples_checked = n;
  report.max_discrepancy = worst.value;
  report.passed = worst.value <= cfg.equality.threshold();
  if (worst.index && worst.value > 0.0) {
    report.worst_input = SampleInput(cfg.sampler, a.input_dim(), seed, *worst.index);
  }
  return report;
}

double EstimateOutputBound(const Network& net, const AuditConfig& cfg, std::uint64_t seed,
                           double safety_factor) {
  ValidateAuditConfig(cfg, net.input_dim());
  if (!(safety_factor > 0.0) || !std::isfinite(safety_factor)) {
    throw InvalidArgument("safety factor must be finite and > 0");
  }
  const std::size_t n = EffectiveSampleCount(cfg);
  const ArgMax best = ParallelArgMax(n, cfg.threads, [&](std::size_t i) {
    return LinfNorm(Forward(net, SampleInput(cfg.sampler, net.input_dim(), seed, i)));
  });
  return best.value * safety_factor;
}

double LipschitzReachBound(const Network& net, double delta) {
  if (!(delta >= 0.0)) throw InvalidArgument("delta must be >= 0");
  // Horner form of the sum: drift_i <= ||A_i|| drift_{i-1} + delta.
  double drift = 0.0;
  for (const Matrix& a : net.layers()) {
    drift = drift * a.InducedInfNorm() + delta;
  }
  return drift;
}

}  // namespace layerwise
