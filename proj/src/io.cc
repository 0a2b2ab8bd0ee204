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

#include "layerwise/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "layerwise/error.h"

namespace layerwise::io {

namespace {

Json ReportValue(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double NumberField(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
    throw FormatError(std::string("expected numeric field \"") + key + "\"");
  }
  return j.at(key).get<double>();
}

std::size_t CountField(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number_unsigned()) {
    throw FormatError(std::string("expected non-negative integer field \"") + key + "\"");
  }
  return j.at(key).get<std::size_t>();
}

void AppendDouble(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string_view s(buf, static_cast<std::size_t>(res.ptr - buf));
  out += s;
  // Keep doubles recognizable as floating point when they print as integers.
  if (s.find_first_of(".eEn") == std::string_view::npos) out += ".0";
}

bool IsScalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void DumpTo(std::string& out, const Json& j, bool pretty, int depth) {
  const auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(2 * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::number_float:
      AppendDouble(out, j.get<double>());
      return;
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += pretty ? ": " : ":";
        DumpTo(out, value, pretty, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      const bool inline_items =
          !pretty || std::all_of(j.begin(), j.end(), [](const Json& e) { return IsScalar(e); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += inline_items && pretty ? ", " : ",";
        first = false;
        if (!inline_items) newline(depth + 1);
        DumpTo(out, e, pretty, depth + 1);
      }
      if (!inline_items && !j.empty()) newline(depth);
      out += ']';
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

Json ToJson(const Matrix& a) {
  Json j;
  j["rows"] = a.rows();
  j["cols"] = a.cols();
  j["entries"] = ToJson(a.entries());
  return j;
}

Json ToJson(const Network& net) {
  Json layers = Json::array();
  for (const Matrix& a : net.layers()) layers.push_back(ToJson(a));
  Json j;
  j["layers"] = std::move(layers);
  return j;
}

Json ToJson(const Transcript& t) {
  Json states = Json::array();
  for (const Vector& s : t.states) states.push_back(ToJson(s));
  Json j;
  j["states"] = std::move(states);
  return j;
}

Json ToJson(std::span<const double> v) {
  Json j = Json::array();
  for (double e : v) j.push_back(ReportValue(e));
  return j;
}

Json ToJson(const VerificationReport& r) {
  Json j;
  j["accepted"] = r.accepted;
  j["delta"] = r.delta;
  j["input_bound"] = r.input_bound;
  j["residuals"] = ToJson(r.residuals);
  j["first_failure"] = r.first_failure ? Json(*r.first_failure) : Json(nullptr);
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

Json ToJson(const AuditReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["max_discrepancy"] = ReportValue(r.max_discrepancy);
  j["samples_checked"] = r.samples_checked;
  j["worst_input"] = r.worst_input ? ToJson(*r.worst_input) : Json(nullptr);
  return j;
}

Json ToJson(const SteeringCertificate& c) {
  Json j;
  j["u_plus"] = ToJson(c.u_plus);
  j["u_minus"] = ToJson(c.u_minus);
  j["achieved"] = ToJson(c.achieved);
  j["target_error"] = ReportValue(c.target_error);
  j["transcript"] = ToJson(c.transcript);
  return j;
}

Json MetaToJson(const SteeredNetwork& sn) {
  const AttackParams& p = sn.params();
  Json j;
  j["delta"] = p.delta;
  j["g"] = p.g;
  j["R"] = p.R;
  j["k"] = p.k;
  j["m"] = p.m;
  j["M"] = p.M;
  j["T"] = p.T;
  j["base_widths"] = sn.base_widths();
  Json ranges = Json::array();
  for (std::size_t i = 1; i < p.k; ++i) {
    const IndexRange plus = sn.trigger_plus_range(i);
    const IndexRange minus = sn.trigger_minus_range(i);
    Json r;
    r["layer"] = i;
    r["plus"] = {plus.begin, plus.end};
    r["minus"] = {minus.begin, minus.end};
    ranges.push_back(std::move(r));
  }
  j["trigger_ranges"] = std::move(ranges);
  return j;
}

Vector VectorFromJson(const Json& j) {
  if (!j.is_array()) throw FormatError("expected a JSON array of numbers");
  Vector v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw FormatError("vector entry is not a number");
    v.push_back(e.get<double>());
  }
  return v;
}

Matrix MatrixFromJson(const Json& j) {
  const std::size_t rows = CountField(j, "rows");
  const std::size_t cols = CountField(j, "cols");
  if (!j.contains("entries")) throw FormatError("matrix without \"entries\"");
  return Matrix(rows, cols, VectorFromJson(j.at("entries")));
}

Network NetworkFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("layers") || !j.at("layers").is_array()) {
    throw FormatError("network document needs a \"layers\" array");
  }
  std::vector<Matrix> layers;
  for (const auto& l : j.at("layers")) layers.push_back(MatrixFromJson(l));
  return Network(std::move(layers));
}

Transcript TranscriptFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("states") || !j.at("states").is_array()) {
    throw FormatError("transcript document needs a \"states\" array");
  }
  Transcript t;
  for (const auto& s : j.at("states")) t.states.push_back(VectorFromJson(s));
  return t;
}

SteeredNetwork SteeredNetworkFromJson(const Json& net, const Json& meta) {
  AttackParams p;
  p.delta = NumberField(meta, "delta");
  p.g = NumberField(meta, "g");
  p.R = NumberField(meta, "R");
  p.k = CountField(meta, "k");
  p.m = CountField(meta, "m");
  p.M = NumberField(meta, "M");
  p.T = NumberField(meta, "T");
  if (!meta.contains("base_widths") || !meta.at("base_widths").is_array()) {
    throw FormatError("meta document needs a \"base_widths\" array");
  }
  std::vector<std::size_t> widths;
  for (const auto& w : meta.at("base_widths")) {
    if (!w.is_number_unsigned()) throw FormatError("base width is not a count");
    widths.push_back(w.get<std::size_t>());
  }
  SteeredNetwork sn(NetworkFromJson(net), std::move(widths), p);

  // Trigger ranges are derived data; if present they must agree.
  if (meta.contains("trigger_ranges")) {
    const Json expected = MetaToJson(sn).at("trigger_ranges");
    if (meta.at("trigger_ranges") != expected) {
      throw DimensionError("trigger ranges in meta do not match base widths");
    }
  }
  return sn;
}

std::string Dump(const Json& j, bool pretty) {
  std::string out;
  DumpTo(out, j, pretty, 0);
  out += '\n';
  return out;
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << Dump(j);
  if (!out) throw FormatError("failed writing " + path.string());
}

std::vector<Vector> ReadNdjsonVectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<Vector> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(VectorFromJson(Json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace layerwise::io
