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
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nccirc/bits.hpp"
#include "nccirc/errors.hpp"

namespace nccirc {

/// Position in a circuit's wire table. Inputs occupy 0..num_inputs-1, then
/// every gate appends its output wires in gate order.
struct WireId {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(WireId, WireId) = default;
};

enum class GateKind : std::uint8_t { And, Or, Not, Const0, Const1, Semantic };

inline const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::And: return "AND";
    case GateKind::Or: return "OR";
    case GateKind::Not: return "NOT";
    case GateKind::Const0: return "CONST0";
    case GateKind::Const1: return "CONST1";
    case GateKind::Semantic: return "TABLE";
  }
  return "?";
}

inline constexpr std::size_t kMaxSemanticArity = 16;

/// Total truth table of a semantic gate. Row r holds the outputs for the input
/// vector whose bit string (input 0 leftmost) reads as r; the row's bits are
/// stored left to right, so bits()[r * width + j] is output j of row r.
class TruthTable {
 public:
  TruthTable(std::size_t arity, std::size_t width, std::vector<std::uint8_t> bits)
      : arity_(arity), width_(width), bits_(std::move(bits)) {}

  /// Tabulates a host function row by row. Intended for arity up to 16.
  template <typename Fn>
  static TruthTable from_function(std::size_t arity, std::size_t width, Fn&& fn) {
    if (arity > kMaxSemanticArity) {
      throw CircuitError("semantic gate arity " + std::to_string(arity) +
                         " exceeds the table limit of " +
                         std::to_string(kMaxSemanticArity));
    }
    std::vector<std::uint8_t> bits;
    bits.reserve((std::size_t{1} << arity) * width);
    for (std::uint64_t row = 0; row < (std::uint64_t{1} << arity); ++row) {
      Bits out = fn(row);
      if (out.size() != width) throw CircuitError("table function returned wrong width");
      bits.insert(bits.end(), out.begin(), out.end());
    }
    return TruthTable(arity, width, std::move(bits));
  }

  std::size_t arity() const { return arity_; }
  std::size_t width() const { return width_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  bool at(std::uint64_t row, std::size_t j) const { return bits_[row * width_ + j] != 0; }

  /// True when the table is complete: 2^arity rows of `width` bits each.
  bool well_formed() const {
    return arity_ <= kMaxSemanticArity && bits_.size() == (std::size_t{1} << arity_) * width_;
  }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  std::size_t arity_;
  std::size_t width_;
  std::vector<std::uint8_t> bits_;
};

struct Gate {
  GateKind kind = GateKind::Const0;
  std::vector<WireId> inputs;
  std::shared_ptr<const TruthTable> table;  // Semantic only

  std::size_t output_width() const {
    if (kind == GateKind::Semantic) return table ? table->width() : 0;
    return 1;
  }

  friend bool operator==(const Gate& a, const Gate& b) {
    if (a.kind != b.kind || a.inputs != b.inputs) return false;
    if (a.kind != GateKind::Semantic) return true;
    if (!a.table || !b.table) return a.table == b.table;
    return *a.table == *b.table;
  }
};

/// Acyclic gate list with labeled input and output wires. Immutable once built;
/// shareable across threads.
class Circuit {
 public:
  Circuit() = default;

  Circuit(std::size_t num_inputs, std::vector<Gate> gates, std::vector<WireId> outputs,
          std::string name = {})
      : num_inputs_(num_inputs),
        gates_(std::move(gates)),
        outputs_(std::move(outputs)),
        name_(std::move(name)) {
    first_output_.reserve(gates_.size());
    std::size_t next = num_inputs_;
    for (const auto& g : gates_) {
      first_output_.push_back(next);
      next += g.output_width();
    }
    wire_count_ = next;
  }

  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t num_outputs() const { return outputs_.size(); }
  std::size_t wire_count() const { return wire_count_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<WireId>& outputs() const { return outputs_; }
  const std::string& name() const { return name_; }

  WireId gate_output(std::size_t gate, std::size_t j = 0) const {
    return WireId{static_cast<std::uint32_t>(first_output_.at(gate) + j)};
  }

  /// Gate index that drives `wire`, or nullopt for input wires.
  std::optional<std::size_t> driver(WireId wire) const {
    if (wire.index < num_inputs_ || wire.index >= wire_count_) return std::nullopt;
    auto it = std::upper_bound(first_output_.begin(), first_output_.end(),
                               static_cast<std::size_t>(wire.index));
    return static_cast<std::size_t>(it - first_output_.begin()) - 1;
  }

  bool has_semantic_gates() const {
    return std::any_of(gates_.begin(), gates_.end(),
                       [](const Gate& g) { return g.kind == GateKind::Semantic; });
  }

  Circuit with_name(std::string name) const {
    Circuit copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }

  /// Structural equality: same inputs, same gates in the same order, same
  /// outputs, same name.
  friend bool operator==(const Circuit& a, const Circuit& b) {
    return a.num_inputs_ == b.num_inputs_ && a.gates_ == b.gates_ && a.outputs_ == b.outputs_ &&
           a.name_ == b.name_;
  }

 private:
  std::size_t num_inputs_ = 0;
  std::vector<Gate> gates_;
  std::vector<WireId> outputs_;
  std::string name_;
  std::vector<std::size_t> first_output_;
  std::size_t wire_count_ = 0;
};

struct Validation {
  bool ok = true;
  std::string message;
  std::optional<std::size_t> gate;  // first offending gate, if any

  explicit operator bool() const { return ok; }
};

inline Validation validate(const Circuit& circuit) {
  auto fail = [](std::optional<std::size_t> gate, std::string msg) {
    return Validation{false, std::move(msg), gate};
  };
  for (std::size_t k = 0; k < circuit.gates().size(); ++k) {
    const Gate& g = circuit.gates()[k];
    const std::string where = "gate g" + std::to_string(k) + " (" + gate_kind_name(g.kind) + ")";
    std::size_t expected = 0;
    switch (g.kind) {
      case GateKind::And:
      case GateKind::Or: expected = 2; break;
      case GateKind::Not: expected = 1; break;
      case GateKind::Const0:
      case GateKind::Const1: expected = 0; break;
      case GateKind::Semantic:
        if (!g.table) return fail(k, "table: " + where + " has no truth table");
        if (g.table->arity() > kMaxSemanticArity) {
          return fail(k, "table: " + where + " arity " + std::to_string(g.table->arity()) +
                             " exceeds " + std::to_string(kMaxSemanticArity));
        }
        if (!g.table->well_formed()) {
          return fail(k, "table: " + where + " truth table has wrong size");
        }
        if (g.table->width() == 0) return fail(k, "table: " + where + " has zero output width");
        expected = g.table->arity();
        break;
    }
    if (g.inputs.size() != expected) {
      return fail(k, "arity: " + where + " expects " + std::to_string(expected) +
                         " inputs, has " + std::to_string(g.inputs.size()));
    }
    const std::size_t own = circuit.gate_output(k).index;
    for (WireId in : g.inputs) {
      if (in.index >= circuit.wire_count()) {
        return fail(k, "dangling: " + where + " references undefined wire " +
                           std::to_string(in.index));
      }
      if (in.index >= own) {
        return fail(k, "topology: " + where + " references wire " + std::to_string(in.index) +
                           " driven by the same or a later gate");
      }
    }
  }
  for (std::size_t j = 0; j < circuit.outputs().size(); ++j) {
    if (circuit.outputs()[j].index >= circuit.wire_count()) {
      return fail(std::nullopt, "dangling: output " + std::to_string(j) +
                                    " references undefined wire " +
                                    std::to_string(circuit.outputs()[j].index));
    }
  }
  return {};
}

inline void require_valid(const Circuit& circuit) {
  if (auto v = validate(circuit); !v) throw CircuitError(v.message);
}

/// Compiled form of a validated circuit. Supports a scalar path (one input
/// vector at a time) and a 64-lane bit-parallel path. Evaluation holds no
/// mutable shared state; callers pass their own scratch buffers.
class Evaluator {
 public:
  explicit Evaluator(const Circuit& circuit)
      : num_inputs_(circuit.num_inputs()),
        wire_count_(circuit.wire_count()),
        outputs_(circuit.outputs()) {
    require_valid(circuit);
    ops_.reserve(circuit.gates().size());
    for (std::size_t k = 0; k < circuit.gates().size(); ++k) {
      const Gate& g = circuit.gates()[k];
      Op op{g.kind, 0, 0, circuit.gate_output(k).index, 0};
      switch (g.kind) {
        case GateKind::And:
        case GateKind::Or:
          op.a = g.inputs[0].index;
          op.b = g.inputs[1].index;
          break;
        case GateKind::Not: op.a = g.inputs[0].index; break;
        case GateKind::Const0:
        case GateKind::Const1: break;
        case GateKind::Semantic:
          op.a = static_cast<std::uint32_t>(semantic_inputs_.size());
          op.b = static_cast<std::uint32_t>(g.inputs.size());
          op.table = static_cast<std::uint32_t>(tables_.size());
          for (WireId in : g.inputs) semantic_inputs_.push_back(in.index);
          tables_.push_back(g.table);
          break;
      }
      ops_.push_back(op);
    }
  }

  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t num_outputs() const { return outputs_.size(); }

  Bits eval(std::span<const std::uint8_t> input) const {
    std::vector<std::uint8_t> wires;
    return eval(input, wires);
  }

  Bits eval(std::span<const std::uint8_t> input, std::vector<std::uint8_t>& wires) const {
    if (input.size() != num_inputs_) {
      throw CircuitError("input length " + std::to_string(input.size()) +
                         " does not match circuit input count " + std::to_string(num_inputs_));
    }
    wires.assign(wire_count_, 0);
    for (std::size_t i = 0; i < num_inputs_; ++i) wires[i] = input[i] & 1u;
    run_scalar(wires);
    Bits out(outputs_.size());
    for (std::size_t j = 0; j < outputs_.size(); ++j) out[j] = wires[outputs_[j].index];
    return out;
  }

  /// Scalar evaluation on state indices (see bits.hpp); input and output
  /// counts must be at most 64.
  std::uint64_t eval_index(std::uint64_t input, std::vector<std::uint8_t>& wires) const {
    wires.resize(wire_count_);
    for (std::size_t i = 0; i < num_inputs_; ++i) {
      wires[i] = static_cast<std::uint8_t>((input >> (num_inputs_ - 1 - i)) & 1u);
    }
    run_scalar(wires);
    std::uint64_t out = 0;
    for (WireId w : outputs_) out = (out << 1) | wires[w.index];
    return out;
  }

  /// Bit-parallel evaluation: lane l of input word i is input bit i of the
  /// l-th vector. `lanes` holds one word per wire and is resized as needed.
  void eval_lanes(std::span<const std::uint64_t> input_words, std::span<std::uint64_t> output_words,
                  std::vector<std::uint64_t>& lanes) const {
    assert(input_words.size() == num_inputs_ && output_words.size() == outputs_.size());
    lanes.resize(wire_count_);
    std::copy(input_words.begin(), input_words.end(), lanes.begin());
    for (const Op& op : ops_) {
      switch (op.kind) {
        case GateKind::And: lanes[op.out] = lanes[op.a] & lanes[op.b]; break;
        case GateKind::Or: lanes[op.out] = lanes[op.a] | lanes[op.b]; break;
        case GateKind::Not: lanes[op.out] = ~lanes[op.a]; break;
        case GateKind::Const0: lanes[op.out] = 0; break;
        case GateKind::Const1: lanes[op.out] = ~std::uint64_t{0}; break;
        case GateKind::Semantic: {
          const TruthTable& t = *tables_[op.table];
          for (std::size_t j = 0; j < t.width(); ++j) lanes[op.out + j] = 0;
          for (unsigned lane = 0; lane < 64; ++lane) {
            std::uint64_t row = 0;
            for (std::uint32_t i = 0; i < op.b; ++i) {
              row = (row << 1) | ((lanes[semantic_inputs_[op.a + i]] >> lane) & 1u);
            }
            for (std::size_t j = 0; j < t.width(); ++j) {
              if (t.at(row, j)) lanes[op.out + j] |= std::uint64_t{1} << lane;
            }
          }
          break;
        }
      }
    }
    for (std::size_t j = 0; j < outputs_.size(); ++j) output_words[j] = lanes[outputs_[j].index];
  }

 private:
  struct Op {
    GateKind kind;
    std::uint32_t a;
    std::uint32_t b;
    std::uint32_t out;
    std::uint32_t table;
  };

  void run_scalar(std::vector<std::uint8_t>& wires) const {
    for (const Op& op : ops_) {
      switch (op.kind) {
        case GateKind::And: wires[op.out] = wires[op.a] & wires[op.b]; break;
        case GateKind::Or: wires[op.out] = wires[op.a] | wires[op.b]; break;
        case GateKind::Not: wires[op.out] = wires[op.a] ^ 1u; break;
        case GateKind::Const0: wires[op.out] = 0; break;
        case GateKind::Const1: wires[op.out] = 1; break;
        case GateKind::Semantic: {
          const TruthTable& t = *tables_[op.table];
          std::uint64_t row = 0;
          for (std::uint32_t i = 0; i < op.b; ++i) row = (row << 1) | wires[semantic_inputs_[op.a + i]];
          for (std::size_t j = 0; j < t.width(); ++j) wires[op.out + j] = t.at(row, j);
          break;
        }
      }
    }
  }

  std::size_t num_inputs_;
  std::size_t wire_count_;
  std::vector<WireId> outputs_;
  std::vector<Op> ops_;
  std::vector<std::uint32_t> semantic_inputs_;
  std::vector<std::shared_ptr<const TruthTable>> tables_;
};

/// Forward evaluation in topological order. Validates the circuit first.
inline Bits eval(const Circuit& circuit, std::span<const std::uint8_t> input) {
  if (input.size() != circuit.num_inputs()) {
    throw CircuitError("input length " + std::to_string(input.size()) +
                       " does not match circuit input count " +
                       std::to_string(circuit.num_inputs()));
  }
  return Evaluator(circuit).eval(input);
}

/// A circuit whose input wire i is identified with its output wire i. The
/// induced function c maps a state y to eval(inner, y).
class ClosedCircuit {
 public:
  explicit ClosedCircuit(Circuit inner) : inner_(std::move(inner)) {
    if (inner_.num_inputs() != inner_.num_outputs()) {
      throw CircuitError("not closable: circuit has " + std::to_string(inner_.num_inputs()) +
                         " inputs and " + std::to_string(inner_.num_outputs()) + " outputs");
    }
  }

  const Circuit& inner() const { return inner_; }
  std::size_t state_width() const { return inner_.num_inputs(); }

  /// The induced function c.
  Bits step(const Bits& state) const { return eval(inner_, state); }

 private:
  Circuit inner_;
};

inline ClosedCircuit close(Circuit circuit) {
  require_valid(circuit);
  return ClosedCircuit(std::move(circuit));
}

/// LSB-first multi-bit bus; elaborates to individual single-bit wires.
using Word = std::vector<WireId>;

/// Incremental circuit construction. The convenience operators fold constants
/// (AND with 0, NOT of a constant, ...); `add_gate` appends a gate verbatim.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::size_t num_inputs) : num_inputs_(num_inputs), next_wire_(num_inputs) {}

  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t gate_count() const { return gates_.size(); }

  WireId input(std::size_t i) const {
    if (i >= num_inputs_) throw CircuitError("input index out of range");
    return WireId{static_cast<std::uint32_t>(i)};
  }

  std::vector<WireId> inputs() const {
    std::vector<WireId> out;
    for (std::size_t i = 0; i < num_inputs_; ++i) out.push_back(input(i));
    return out;
  }

  /// Appends `gate` unchanged and returns its first output wire.
  WireId add_gate(Gate gate) {
    const WireId first{static_cast<std::uint32_t>(next_wire_)};
    next_wire_ += gate.output_width();
    gates_.push_back(std::move(gate));
    kinds_.resize(next_wire_, Known::Unknown);
    if (gates_.back().kind == GateKind::Const0) kinds_[first.index] = Known::Zero;
    if (gates_.back().kind == GateKind::Const1) kinds_[first.index] = Known::One;
    return first;
  }

  WireId constant(bool value) {
    auto& cached = value ? const1_ : const0_;
    if (!cached) cached = add_gate(Gate{value ? GateKind::Const1 : GateKind::Const0, {}, nullptr});
    return *cached;
  }

  std::optional<bool> known(WireId w) const {
    if (w.index >= kinds_.size() || kinds_[w.index] == Known::Unknown) return std::nullopt;
    return kinds_[w.index] == Known::One;
  }

  WireId not_(WireId a) {
    if (auto k = known(a)) return constant(!*k);
    return add_gate(Gate{GateKind::Not, {a}, nullptr});
  }

  WireId and_(WireId a, WireId b) {
    auto ka = known(a), kb = known(b);
    if ((ka && !*ka) || (kb && !*kb)) return constant(false);
    if (ka) return b;
    if (kb) return a;
    if (a == b) return a;
    return add_gate(Gate{GateKind::And, {a, b}, nullptr});
  }

  WireId or_(WireId a, WireId b) {
    auto ka = known(a), kb = known(b);
    if ((ka && *ka) || (kb && *kb)) return constant(true);
    if (ka) return b;
    if (kb) return a;
    if (a == b) return a;
    return add_gate(Gate{GateKind::Or, {a, b}, nullptr});
  }

  WireId xor_(WireId a, WireId b) { return and_(or_(a, b), not_(and_(a, b))); }
  WireId xnor_(WireId a, WireId b) { return not_(xor_(a, b)); }

  /// sel ? on_true : on_false
  WireId mux(WireId sel, WireId on_true, WireId on_false) {
    if (auto k = known(sel)) return *k ? on_true : on_false;
    if (on_true == on_false) return on_true;
    return or_(and_(sel, on_true), and_(not_(sel), on_false));
  }

  WireId and_all(std::span<const WireId> wires) { return tree(wires, true); }
  WireId or_all(std::span<const WireId> wires) { return tree(wires, false); }

  /// Appends a semantic gate and returns its output wires in table order.
  std::vector<WireId> semantic(TruthTable table, std::vector<WireId> inputs) {
    auto shared = std::make_shared<const TruthTable>(std::move(table));
    const std::size_t width = shared->width();
    WireId first = add_gate(Gate{GateKind::Semantic, std::move(inputs), std::move(shared)});
    std::vector<WireId> out;
    for (std::size_t j = 0; j < width; ++j) out.push_back(WireId{first.index + static_cast<std::uint32_t>(j)});
    return out;
  }

  /// Instantiates `sub` with its inputs bound to `inputs`; returns the wires
  /// carrying its outputs. Basic gates go through the folding operators.
  std::vector<WireId> inline_circuit(const Circuit& sub, std::span<const WireId> inputs) {
    if (inputs.size() != sub.num_inputs()) {
      throw CircuitError("inline_circuit: expected " + std::to_string(sub.num_inputs()) +
                         " inputs, got " + std::to_string(inputs.size()));
    }
    require_valid(sub);
    std::vector<WireId> map(sub.wire_count());
    std::copy(inputs.begin(), inputs.end(), map.begin());
    for (std::size_t k = 0; k < sub.gates().size(); ++k) {
      const Gate& g = sub.gates()[k];
      const std::size_t out = sub.gate_output(k).index;
      auto in = [&](std::size_t i) { return map[g.inputs[i].index]; };
      switch (g.kind) {
        case GateKind::And: map[out] = and_(in(0), in(1)); break;
        case GateKind::Or: map[out] = or_(in(0), in(1)); break;
        case GateKind::Not: map[out] = not_(in(0)); break;
        case GateKind::Const0: map[out] = constant(false); break;
        case GateKind::Const1: map[out] = constant(true); break;
        case GateKind::Semantic: {
          std::vector<WireId> args;
          for (std::size_t i = 0; i < g.inputs.size(); ++i) args.push_back(in(i));
          WireId first = add_gate(Gate{GateKind::Semantic, std::move(args), g.table});
          for (std::size_t j = 0; j < g.output_width(); ++j) {
            map[out + j] = WireId{first.index + static_cast<std::uint32_t>(j)};
          }
          break;
        }
      }
    }
    std::vector<WireId> result;
    for (WireId w : sub.outputs()) result.push_back(map[w.index]);
    return result;
  }

  Circuit build(std::vector<WireId> outputs, std::string name = {}) && {
    return Circuit(num_inputs_, std::move(gates_), std::move(outputs), std::move(name));
  }

  Circuit build(std::vector<WireId> outputs, std::string name = {}) const& {
    return Circuit(num_inputs_, gates_, std::move(outputs), std::move(name));
  }

 private:
  enum class Known : std::uint8_t { Unknown, Zero, One };

  WireId tree(std::span<const WireId> wires, bool is_and) {
    if (wires.empty()) return constant(is_and);
    std::vector<WireId> level(wires.begin(), wires.end());
    while (level.size() > 1) {
      std::vector<WireId> next;
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
        next.push_back(is_and ? and_(level[i], level[i + 1]) : or_(level[i], level[i + 1]));
      }
      if (level.size() % 2) next.push_back(level.back());
      level = std::move(next);
    }
    return level.front();
  }

  std::size_t num_inputs_;
  std::size_t next_wire_;
  std::vector<Gate> gates_;
  std::vector<Known> kinds_ = std::vector<Known>(num_inputs_, Known::Unknown);
  std::optional<WireId> const0_;
  std::optional<WireId> const1_;
};

/// Circuit on `sub.num_inputs() - prefix.size()` inputs obtained by fixing the
/// first inputs of `sub` to the constants in `prefix`.
inline Circuit bind_prefix(const Circuit& sub, const Bits& prefix, std::string name = {}) {
  if (prefix.size() > sub.num_inputs()) throw CircuitError("bind_prefix: prefix longer than input count");
  CircuitBuilder b(sub.num_inputs() - prefix.size());
  std::vector<WireId> args;
  for (auto bit : prefix) args.push_back(b.constant(bit != 0));
  for (std::size_t i = 0; i < b.num_inputs(); ++i) args.push_back(b.input(i));
  auto outs = b.inline_circuit(sub, args);
  return std::move(b).build(std::move(outs), std::move(name));
}

}  // namespace nccirc
