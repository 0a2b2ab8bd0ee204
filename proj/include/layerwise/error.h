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
#include <stdexcept>
#include <string>

namespace layerwise {

// Base class for every error raised by the library. Verification rejections
// are not errors; they are reported through VerificationReport.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes of matrices, vectors or transcripts do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A NaN or infinity showed up in an input or an intermediate value.
class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& what,
                          std::optional<std::size_t> layer = std::nullopt)
      : Error(what), layer_(layer) {}

  // 1-based layer index when the value came out of a layer evaluation.
  std::optional<std::size_t> layer() const { return layer_; }

 private:
  std::optional<std::size_t> layer_;
};

// A scalar parameter is outside its allowed range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Steering target has ||z||_inf > R.
class TargetOutOfRange : public Error {
 public:
  using Error::Error;
};

// The honest output on the requested input violates ||F(x)||_inf <= R.
class OutputBoundViolated : public Error {
 public:
  OutputBoundViolated(const std::string& what, double actual_norm)
      : Error(what), actual_norm_(actual_norm) {}

  double actual_norm() const { return actual_norm_; }

 private:
  double actual_norm_;
};

// Malformed JSON or a document that does not match the expected schema.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace layerwise
