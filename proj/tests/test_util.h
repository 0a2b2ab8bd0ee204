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
#include <random>
#include <vector>

#include "layerwise/network.h"
#include "layerwise/random.h"
#include "oracle/naive_forward.h"

namespace layerwise::testing {

struct RandomNetOptions {
  std::size_t max_dim = 8;
  std::size_t min_depth = 2;
  std::size_t max_depth = 6;
  double weight = 2.0;
};

inline std::size_t UniformCount(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Vector RandomVector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  Vector v(n);
  for (double& e : v) e = UniformReal(rng, -scale, scale);
  return v;
}

inline Network RandomNetwork(std::mt19937_64& rng, const RandomNetOptions& o = {}) {
  const std::size_t k = UniformCount(rng, o.min_depth, o.max_depth);
  std::vector<std::size_t> dims(k + 1);
  for (auto& d : dims) d = UniformCount(rng, 1, o.max_dim);
  std::vector<Matrix> layers;
  for (std::size_t i = 1; i <= k; ++i) {
    std::vector<double> e(dims[i] * dims[i - 1]);
    for (double& v : e) v = UniformReal(rng, -o.weight, o.weight);
    layers.emplace_back(dims[i], dims[i - 1], std::move(e));
  }
  return Network(std::move(layers));
}

inline std::vector<NaiveMatrix> ToNaive(const Network& net) {
  std::vector<NaiveMatrix> out;
  for (const Matrix& a : net.layers()) {
    NaiveMatrix m(a.rows(), std::vector<double>(a.cols()));
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.cols(); ++c) m[r][c] = a(r, c);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace layerwise::testing
