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

// Netlist text format, one statement per line, '#' starts a comment:
//
//   inputs 2 outputs 1 version 1        header; "outputs", "version" and a
//                                       trailing "closed" are optional
//   name half_adder_sum                 optional
//   g0 = AND in0 in1
//   g1 = NOT g0
//   t = TABLE 2 0110 in0 in1            TABLE <width> <row-major bits> args
//   outputs t.0 g1                      <gate>.<j> picks output j
//
// Gates may use any identifier that is not an input name; the serializer
// renames gate k to g<k> and writes the canonical header.

#include <charconv>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nccirc/circuit.hpp"

namespace nccirc {

inline constexpr int kNetlistVersion = 1;
inline constexpr std::size_t kMaxNetlistWires = std::size_t{1} << 24;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

struct NetlistDocument {
  Circuit circuit;
  int version = kNetlistVersion;
  bool closed = false;  // header carried the "closed" marker
  std::optional<std::size_t> declared_outputs;
};

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || s.size() > 256) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(s[0])) return false;
  for (char c : s) {
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

inline std::optional<std::uint64_t> parse_count(std::string_view s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  if (s.size() > 1 && s[0] == '0') return std::nullopt;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

/// "in" followed by digits; reserved for input names.
inline bool looks_like_input(std::string_view s) {
  if (s.size() < 3 || s.substr(0, 2) != "in") return false;
  for (char c : s.substr(2)) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

/// "in<k>" with a canonical decimal k, or nullopt.
inline std::optional<std::uint64_t> input_index(std::string_view s) {
  if (s.size() < 3 || s.substr(0, 2) != "in") return std::nullopt;
  return parse_count(s.substr(2));
}

class NetlistParser {
 public:
  explicit NetlistParser(std::string_view text) : text_(text) {}

  NetlistDocument run() {
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      ++line_;
      statement(tokenize(text_.substr(pos, end - pos)));
      if (end == text_.size()) break;
      pos = end + 1;
    }
    if (!have_header_) throw ParseError(line_, 1, "missing 'inputs' header");
    if (!have_outputs_) throw ParseError(line_, 1, "missing 'outputs' statement");
    Circuit c(n_in_, std::move(gates_), std::move(outputs_), std::move(name_));
    const Validation v = validate(c);
    if (!v.ok) throw ParseError(line_, 1, v.message);
    if (closed_ && c.num_inputs() != c.num_outputs()) {
      throw ParseError(header_line_, 1, "closed netlist has " + std::to_string(c.num_inputs()) + " inputs and " +
                                            std::to_string(c.num_outputs()) + " outputs");
    }
    return NetlistDocument{std::move(c), version_, closed_, declared_outputs_};
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& msg) const { throw ParseError(line_, at.column, msg); }

  void statement(const std::vector<Token>& t) {
    if (t.empty()) return;
    if (t[0].text == "inputs") return header(t);
    if (!have_header_) fail(t[0], "expected 'inputs' header before '" + std::string(t[0].text) + "'");
    if (have_outputs_) fail(t[0], "statement after 'outputs'");
    if (t[0].text == "name") {
      if (t.size() != 2) fail(t[0], "'name' takes exactly one word");
      if (!gates_.empty() || saw_name_) fail(t[0], "'name' must come once, before the gates");
      saw_name_ = true;
      name_ = std::string(t[1].text);
      return;
    }
    if (t[0].text == "outputs") return outputs(t);
    if (t.size() >= 2 && t[1].text == "=") return gate(t);
    fail(t[0], "unknown statement '" + std::string(t[0].text) + "'");
  }

  void header(const std::vector<Token>& t) {
    if (have_header_) fail(t[0], "duplicate 'inputs' header");
    have_header_ = true;
    header_line_ = line_;
    if (t.size() < 2) fail(t[0], "'inputs' needs a count");
    const auto n = parse_count(t[1].text);
    if (!n) fail(t[1], "bad input count '" + std::string(t[1].text) + "'");
    if (*n > kMaxNetlistWires) fail(t[1], "input count exceeds " + std::to_string(kMaxNetlistWires));
    n_in_ = static_cast<std::size_t>(*n);
    wire_count_ = n_in_;
    std::size_t i = 2;
    while (i < t.size()) {
      const std::string_view key = t[i].text;
      if (key == "closed") {
        if (closed_) fail(t[i], "duplicate 'closed'");
        closed_ = true;
        ++i;
        continue;
      }
      if (key != "outputs" && key != "version") fail(t[i], "unexpected '" + std::string(key) + "' in header");
      if (i + 1 >= t.size()) fail(t[i], "'" + std::string(key) + "' needs a value");
      const auto v = parse_count(t[i + 1].text);
      if (!v) fail(t[i + 1], "bad number '" + std::string(t[i + 1].text) + "'");
      if (key == "outputs") {
        if (declared_outputs_) fail(t[i], "duplicate 'outputs' count");
        if (*v > kMaxNetlistWires) fail(t[i + 1], "output count too large");
        declared_outputs_ = static_cast<std::size_t>(*v);
      } else {
        if (*v != kNetlistVersion) fail(t[i + 1], "unsupported version " + std::string(t[i + 1].text));
        version_ = static_cast<int>(*v);
      }
      i += 2;
    }
  }

  WireId resolve(const Token& tok) const {
    const std::string_view s = tok.text;
    if (looks_like_input(s)) {
      const auto k = input_index(s);
      if (!k) fail(tok, "bad input name '" + std::string(s) + "'");
      if (*k >= n_in_) fail(tok, "input '" + std::string(s) + "' out of range (" + std::to_string(n_in_) + " inputs)");
      return WireId{static_cast<std::uint32_t>(*k)};
    }
    std::string_view base = s;
    std::optional<std::uint64_t> sub;
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
      base = s.substr(0, dot);
      sub = parse_count(s.substr(dot + 1));
      if (!sub) fail(tok, "bad output selector in '" + std::string(s) + "'");
    }
    if (!is_identifier(base)) fail(tok, "bad identifier '" + std::string(s) + "'");
    const auto it = names_.find(std::string(base));
    if (it == names_.end()) fail(tok, "undefined identifier '" + std::string(base) + "'");
    const auto [first, width] = it->second;
    if (!sub) {
      if (width != 1) fail(tok, "'" + std::string(base) + "' has " + std::to_string(width) + " outputs; select one");
      return WireId{first};
    }
    if (*sub >= width) fail(tok, "'" + std::string(base) + "' has no output " + std::to_string(*sub));
    return WireId{static_cast<std::uint32_t>(first + *sub)};
  }

  void gate(const std::vector<Token>& t) {
    const Token& id = t[0];
    if (!is_identifier(id.text) || looks_like_input(id.text)) {
      fail(id, "bad gate name '" + std::string(id.text) + "'");
    }
    if (names_.count(std::string(id.text))) fail(id, "duplicate identifier '" + std::string(id.text) + "'");
    if (t.size() < 3) fail(t[1], "missing gate kind");
    const std::string_view kind = t[2].text;
    Gate g;
    std::size_t args = 3;
    if (kind == "AND") {
      g.kind = GateKind::And;
    } else if (kind == "OR") {
      g.kind = GateKind::Or;
    } else if (kind == "NOT") {
      g.kind = GateKind::Not;
    } else if (kind == "CONST0") {
      g.kind = GateKind::Const0;
    } else if (kind == "CONST1") {
      g.kind = GateKind::Const1;
    } else if (kind == "TABLE") {
      g.kind = GateKind::Semantic;
      if (t.size() < 5) fail(t[2], "TABLE needs a width and a bit string");
      const auto width = parse_count(t[3].text);
      if (!width || *width == 0 || *width > 64) fail(t[3], "bad TABLE width '" + std::string(t[3].text) + "'");
      const std::size_t arity = t.size() - 5;
      if (arity > kMaxSemanticArity) fail(t[2], "TABLE arity exceeds " + std::to_string(kMaxSemanticArity));
      const std::string_view bits = t[4].text;
      const std::size_t expected = (std::size_t{1} << arity) * *width;
      if (bits.size() != expected) {
        fail(t[4], "TABLE with " + std::to_string(arity) + " inputs and width " + std::to_string(*width) + " needs " +
                       std::to_string(expected) + " bits, got " + std::to_string(bits.size()));
      }
      std::vector<std::uint8_t> cells(bits.size());
      for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] != '0' && bits[k] != '1') fail(t[4], "TABLE bits must be 0 or 1");
        cells[k] = bits[k] == '1';
      }
      g.table = std::make_shared<const TruthTable>(arity, static_cast<std::size_t>(*width), std::move(cells));
      args = 5;
    } else {
      fail(t[2], "unknown gate kind '" + std::string(kind) + "'");
    }
    for (std::size_t i = args; i < t.size(); ++i) g.inputs.push_back(resolve(t[i]));
    const std::size_t want = g.kind == GateKind::Semantic ? g.table->arity()
                             : g.kind == GateKind::Not   ? 1
                             : (g.kind == GateKind::And || g.kind == GateKind::Or) ? 2
                                                                                   : 0;
    if (g.inputs.size() != want) {
      fail(t[2], std::string(kind) + " takes " + std::to_string(want) + " inputs, got " +
                     std::to_string(g.inputs.size()));
    }
    const std::size_t width = g.output_width();
    if (wire_count_ + width > kMaxNetlistWires) fail(id, "netlist too large");
    names_.emplace(std::string(id.text), std::pair{static_cast<std::uint32_t>(wire_count_), width});
    wire_count_ += width;
    gates_.push_back(std::move(g));
  }

  void outputs(const std::vector<Token>& t) {
    have_outputs_ = true;
    for (std::size_t i = 1; i < t.size(); ++i) outputs_.push_back(resolve(t[i]));
    if (declared_outputs_ && *declared_outputs_ != outputs_.size()) {
      fail(t[0], "header declares " + std::to_string(*declared_outputs_) + " outputs, statement lists " +
                     std::to_string(outputs_.size()));
    }
  }

  std::string_view text_;
  std::size_t line_ = 0;
  bool have_header_ = false;
  bool have_outputs_ = false;
  bool saw_name_ = false;
  bool closed_ = false;
  std::size_t header_line_ = 0;
  int version_ = kNetlistVersion;
  std::optional<std::size_t> declared_outputs_;
  std::size_t n_in_ = 0;
  std::size_t wire_count_ = 0;
  std::vector<Gate> gates_;
  std::vector<WireId> outputs_;
  std::string name_;
  std::unordered_map<std::string, std::pair<std::uint32_t, std::size_t>> names_;
};

}  // namespace detail

/// Parses a netlist; throws ParseError with the line and column of the first
/// problem. The result always validates.
inline NetlistDocument parse_document(std::string_view text) { return detail::NetlistParser(text).run(); }

inline Circuit parse(std::string_view text) { return parse_document(text).circuit; }

/// Parses a document that must be closed (n_in = n_out).
inline ClosedCircuit parse_closed(std::string_view text) {
  NetlistDocument doc = parse_document(text);
  if (doc.circuit.num_inputs() != doc.circuit.num_outputs()) {
    throw ParseError(1, 1, "not closable: " + std::to_string(doc.circuit.num_inputs()) + " inputs, " +
                               std::to_string(doc.circuit.num_outputs()) + " outputs");
  }
  return ClosedCircuit(std::move(doc.circuit));
}

/// Canonical text: header with counts and version, optional name, gate k as
/// g<k> in gate order, outputs. Byte-for-byte deterministic.
inline std::string serialize(const Circuit& circuit, bool closed = false) {
  require_valid(circuit);
  std::string out = "inputs " + std::to_string(circuit.num_inputs()) + " outputs " +
                    std::to_string(circuit.num_outputs()) + " version " + std::to_string(kNetlistVersion);
  if (closed) out += " closed";
  out += '\n';
  if (!circuit.name().empty()) {
    const auto toks = detail::tokenize(circuit.name());
    if (toks.size() != 1 || toks[0].text.size() != circuit.name().size()) {
      throw CircuitError("circuit name '" + circuit.name() + "' is not a single word");
    }
    out += "name " + circuit.name() + '\n';
  }
  auto ref = [&](WireId w) -> std::string {
    if (w.index < circuit.num_inputs()) return "in" + std::to_string(w.index);
    const std::size_t k = *circuit.driver(w);
    std::string s = "g" + std::to_string(k);
    if (circuit.gates()[k].output_width() != 1) s += "." + std::to_string(w.index - circuit.gate_output(k).index);
    return s;
  };
  for (std::size_t k = 0; k < circuit.gates().size(); ++k) {
    const Gate& g = circuit.gates()[k];
    out += "g" + std::to_string(k) + " = " + gate_kind_name(g.kind);
    if (g.kind == GateKind::Semantic) {
      out += ' ' + std::to_string(g.table->width()) + ' ';
      for (std::uint8_t bit : g.table->bits()) out += bit ? '1' : '0';
    }
    for (WireId in : g.inputs) out += ' ' + ref(in);
    out += '\n';
  }
  out += "outputs";
  for (WireId w : circuit.outputs()) out += ' ' + ref(w);
  out += '\n';
  return out;
}

inline std::string serialize(const ClosedCircuit& closed) { return serialize(closed.inner(), true); }

}  // namespace nccirc
