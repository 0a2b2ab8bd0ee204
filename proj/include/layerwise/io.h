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

// JSON documents exchanged by the command-line tool.
//
//   network:    {"layers": [{"rows": R, "cols": C, "entries": [row-major]}]}
//   transcript: {"states": [[...], ...]}
//   vector:     [x0, x1, ...]
//   meta:       {"delta", "g", "R", "k", "m", "M", "T", "base_widths",
//                "trigger_ranges": [{"layer", "plus": [b, e], "minus": [b, e]}]}
//
// Doubles are written in the shortest decimal form that parses back to the
// same bits.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "layerwise/attack.h"
#include "layerwise/audit.h"
#include "layerwise/network.h"
#include "layerwise/steering.h"
#include "layerwise/verifier.h"

namespace layerwise::io {

using Json = nlohmann::ordered_json;

Json ToJson(const Matrix& a);
Json ToJson(const Network& net);
Json ToJson(const Transcript& t);
Json ToJson(std::span<const double> v);
Json ToJson(const VerificationReport& r);
Json ToJson(const AuditReport& r);
Json ToJson(const SteeringCertificate& c);
Json MetaToJson(const SteeredNetwork& sn);

// All parsers throw FormatError when the document does not match the
// schema; shape and finiteness violations surface as the library's own
// errors.
Matrix MatrixFromJson(const Json& j);
Network NetworkFromJson(const Json& j);
Transcript TranscriptFromJson(const Json& j);
Vector VectorFromJson(const Json& j);
SteeredNetwork SteeredNetworkFromJson(const Json& net, const Json& meta);

// Serializes with shortest round-trip doubles. Arrays of scalars stay on
// one line when pretty-printing.
std::string Dump(const Json& j, bool pretty = true);

Json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path, const Json& j);
// One JSON array per non-blank line.
std::vector<Vector> ReadNdjsonVectors(const std::filesystem::path& path);

}  // namespace layerwise::io
