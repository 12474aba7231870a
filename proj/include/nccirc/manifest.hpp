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

// JSON manifests tying netlists together. Paths inside a manifest are
// relative to the manifest's directory.
//
// CTC setup:
//   {"format": "nccirc-ctc-setup", "version": 1,
//    "parties": [{"input_bits": 1, "output_bits": 1}, ...],
//    "process": "w.nl",
//    "local_operations": ["f1.nl", ...]}          optional
//
// Construction:
//   {"format": "nccirc-construction", "version": 1, "name": "odd",
//    "kind": "decision" | "search", "instance_bits": 3, "witness_bits": 3,
//    "yes": "yes.nl", "no": "no.nl"}                decision
//    "relation": "r.nl"                             search
// Every template netlist reads the instance first, then the witness, and has
// one output.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nccirc/constructions.hpp"
#include "nccirc/ctc.hpp"
#include "nccirc/netlist.hpp"

namespace nccirc {

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses a netlist file; parse errors name the file.
inline Circuit load_netlist(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path.string() + ": " + e.message());
  }
}

namespace detail {

inline nlohmann::json load_manifest_json(const std::filesystem::path& path, const char* format) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ManifestError(path.string() + ": manifest must be a JSON object");
  if (j.value("format", std::string()) != format) {
    throw ManifestError(path.string() + ": expected format \"" + std::string(format) + "\"");
  }
  if (j.value("version", 0) != 1) throw ManifestError(path.string() + ": unsupported manifest version");
  return j;
}

template <typename T>
T field(const nlohmann::json& j, const char* key, const std::filesystem::path& path) {
  if (!j.contains(key)) throw ManifestError(path.string() + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ManifestError(path.string() + ": bad value for \"" + key + "\"");
  }
}

}  // namespace detail

struct CtcSetup {
  ctc::ProcessFunction process;
  std::optional<std::vector<ctc::LocalOperation>> local_operations;
};

inline CtcSetup load_ctc_setup(const std::filesystem::path& path) {
  const auto j = detail::load_manifest_json(path, "nccirc-ctc-setup");
  const auto dir = path.parent_path();
  CtcSetup s;
  const auto parties = detail::field<nlohmann::json>(j, "parties", path);
  if (!parties.is_array() || parties.empty()) throw ManifestError(path.string() + ": \"parties\" must be a non-empty list");
  for (const auto& p : parties) {
    s.process.parties.push_back(
        {detail::field<std::size_t>(p, "input_bits", path), detail::field<std::size_t>(p, "output_bits", path)});
  }
  ctc::check_setup(s.process.parties);
  s.process.map = load_netlist(dir / detail::field<std::string>(j, "process", path));
  ctc::check_process(s.process);
  if (j.contains("local_operations")) {
    const auto files = detail::field<std::vector<std::string>>(j, "local_operations", path);
    if (files.size() != s.process.parties.size()) {
      throw ManifestError(path.string() + ": need one local operation per party");
    }
    std::vector<ctc::LocalOperation> ops;
    for (std::size_t k = 0; k < files.size(); ++k) ops.push_back({k, load_netlist(dir / files[k])});
    s.local_operations = std::move(ops);
  }
  return s;
}

enum class ConstructionKind { Decision, Search };

struct Construction {
  std::string name;
  ConstructionKind kind = ConstructionKind::Decision;
  std::size_t instance_bits = 0;
  std::size_t witness_bits = 0;
  VerifierPair pair;     // Decision
  RelationSpec relation;  // Search
};

inline Construction load_construction(const std::filesystem::path& path) {
  const auto j = detail::load_manifest_json(path, "nccirc-construction");
  const auto dir = path.parent_path();
  Construction c;
  c.name = j.value("name", path.stem().string());
  const auto kind = detail::field<std::string>(j, "kind", path);
  if (kind == "decision") {
    c.kind = ConstructionKind::Decision;
  } else if (kind == "search") {
    c.kind = ConstructionKind::Search;
  } else {
    throw ManifestError(path.string() + ": \"kind\" must be \"decision\" or \"search\"");
  }
  c.instance_bits = detail::field<std::size_t>(j, "instance_bits", path);
  c.witness_bits = detail::field<std::size_t>(j, "witness_bits", path);
  const std::size_t n = c.instance_bits, q = c.witness_bits;
  auto load_template = [&](const char* key) {
    Circuit t = load_netlist(dir / detail::field<std::string>(j, key, path));
    if (t.num_inputs() != n + q || t.num_outputs() != 1) {
      throw ManifestError(path.string() + ": template \"" + key + "\" must have " + std::to_string(n + q) +
                          " inputs and 1 output");
    }
    auto bound = template_builder(std::move(t));
    return InstanceBuilder([bound, n, key = std::string(key)](const Bits& x) {
      if (x.size() != n) {
        throw CircuitError("instance has " + std::to_string(x.size()) + " bits; " + key + " expects " +
                           std::to_string(n));
      }
      return bound(x);
    });
  };
  const WidthFn width = [q](std::size_t) { return q; };
  if (c.kind == ConstructionKind::Decision) {
    c.pair = VerifierPair{load_template("yes"), load_template("no"), width, c.name};
  } else {
    c.relation = RelationSpec{load_template("relation"), width, PromiseKind::TotalUnique, c.name};
  }
  return c;
}

}  // namespace nccirc
