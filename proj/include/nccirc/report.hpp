// Copyright 2026 The nccirc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nccirc/bits.hpp"

namespace nccirc {

inline constexpr int kReportVersion = 1;

enum class Verdict { Consistent, NoFixedPoint, MultipleFixedPoints };
enum class Engine { Exhaustive, FunctionalGraph, CnfCount };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Consistent: return "consistent";
    case Verdict::NoFixedPoint: return "no_fixed_point";
    case Verdict::MultipleFixedPoints: return "multiple";
  }
  return "?";
}

inline const char* engine_name(Engine e) {
  switch (e) {
    case Engine::Exhaustive: return "exhaustive";
    case Engine::FunctionalGraph: return "functional-graph";
    case Engine::CnfCount: return "cnf-count";
  }
  return "?";
}

inline Engine parse_engine(const std::string& name) {
  if (name == "exhaustive") return Engine::Exhaustive;
  if (name == "functional-graph" || name == "graph") return Engine::FunctionalGraph;
  if (name == "cnf-count" || name == "cnf") return Engine::CnfCount;
  throw std::invalid_argument("unknown engine '" + name + "'");
}

/// Outcome of the uniqueness check on a closed circuit's induced function c.
///
/// Consistent: `fixed_point` is the only y with c(y) = y.
/// MultipleFixedPoints: `witnesses` holds the two lexicographically smallest
/// fixed points.
/// NoFixedPoint: `trace` holds the orbit of the all-zero state (truncated), a
/// path of states none of which is fixed.
struct ConsistencyReport {
  Verdict verdict = Verdict::NoFixedPoint;
  std::optional<Bits> fixed_point;
  std::vector<Bits> witnesses;
  std::vector<Bits> trace;
  Engine engine = Engine::Exhaustive;
  std::uint64_t states_examined = 0;

  bool consistent() const { return verdict == Verdict::Consistent; }
};

/// Report as a key/value tree. Keys are emitted in sorted order, so equal
/// inputs give byte-identical text.
inline nlohmann::json report_json(const ConsistencyReport& r) {
  nlohmann::json j;
  j["format"] = "nccirc-report";
  j["version"] = kReportVersion;
  j["verdict"] = verdict_name(r.verdict);
  j["engine"] = engine_name(r.engine);
  if (r.verdict == Verdict::Consistent && r.fixed_point) j["fixed_point"] = to_string(*r.fixed_point);
  std::vector<std::string> counterexamples;
  if (r.verdict == Verdict::MultipleFixedPoints) {
    for (const auto& w : r.witnesses) counterexamples.push_back(to_string(w));
    std::sort(counterexamples.begin(), counterexamples.end());
  } else if (r.verdict == Verdict::NoFixedPoint) {
    for (const auto& s : r.trace) counterexamples.push_back(to_string(s));
  }
  j["counterexamples"] = counterexamples;
  j["timing"] = {{"states_examined", r.states_examined}};
  return j;
}

inline std::string emit_report(const nlohmann::json& payload) {
  nlohmann::json j = payload;
  if (!j.contains("format")) j["format"] = "nccirc-report";
  if (!j.contains("version")) j["version"] = kReportVersion;
  return j.dump(2) + "\n";
}

/// Consistency report merged with an analysis payload (payload keys win).
inline std::string emit_report(const ConsistencyReport& r, const nlohmann::json& payload = nlohmann::json::object()) {
  nlohmann::json j = report_json(r);
  for (auto it = payload.begin(); it != payload.end(); ++it) j[it.key()] = it.value();
  return emit_report(j);
}

}  // namespace nccirc
