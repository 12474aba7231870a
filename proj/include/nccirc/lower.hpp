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

// Lowering of semantic (truth-table) gates to AND/OR/NOT. Each output bit is
// the OR of the minterms of its true rows, combined with balanced OR trees.
// Minterms are built as balanced AND trees and shared between output bits of
// the same gate. No minimization is attempted.

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "nccirc/circuit.hpp"

namespace nccirc {

namespace detail {

class MintermBuilder {
 public:
  MintermBuilder(CircuitBuilder& b, std::vector<WireId> inputs) : b_(b), inputs_(std::move(inputs)) {}

  /// Wire that is 1 exactly when the inputs spell `row`.
  WireId minterm(std::uint64_t row) { return build(0, inputs_.size(), row); }

 private:
  struct Key {
    std::size_t lo, hi;
    std::uint64_t row;
    bool operator<(const Key& o) const {
      return std::tie(lo, hi, row) < std::tie(o.lo, o.hi, o.row);
    }
  };

  // Minterm over inputs [lo, hi) for the sub-row `row` (width hi - lo).
  WireId build(std::size_t lo, std::size_t hi, std::uint64_t row) {
    if (hi - lo == 1) {
      if (row & 1u) return inputs_[lo];
      return negated(lo);
    }
    Key key{lo, hi, row};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const std::size_t mid = lo + (hi - lo) / 2;
    const std::size_t right_width = hi - mid;
    const WireId left = build(lo, mid, row >> right_width);
    const WireId right = build(mid, hi, row & ((std::uint64_t{1} << right_width) - 1));
    const WireId out = b_.add_gate(Gate{GateKind::And, {left, right}, nullptr});
    cache_.emplace(key, out);
    return out;
  }

  WireId negated(std::size_t i) {
    if (nots_.size() < inputs_.size()) nots_.resize(inputs_.size());
    if (!nots_[i]) nots_[i] = b_.add_gate(Gate{GateKind::Not, {inputs_[i]}, nullptr});
    return *nots_[i];
  }

  CircuitBuilder& b_;
  std::vector<WireId> inputs_;
  std::vector<std::optional<WireId>> nots_;
  std::map<Key, WireId> cache_;
};

inline WireId balanced_or(CircuitBuilder& b, std::vector<WireId> level) {
  while (level.size() > 1) {
    std::vector<WireId> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      next.push_back(b.add_gate(Gate{GateKind::Or, {level[i], level[i + 1]}, nullptr}));
    }
    if (level.size() % 2) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

}  // namespace detail

/// Replaces every semantic gate by AND/OR/NOT logic. Circuits without semantic
/// gates are returned unchanged.
inline Circuit lower(const Circuit& circuit) {
  require_valid(circuit);
  if (!circuit.has_semantic_gates()) return circuit;

  CircuitBuilder b(circuit.num_inputs());
  std::vector<WireId> map(circuit.wire_count());
  for (std::size_t i = 0; i < circuit.num_inputs(); ++i) map[i] = b.input(i);

  for (std::size_t k = 0; k < circuit.gates().size(); ++k) {
    const Gate& g = circuit.gates()[k];
    const std::size_t out = circuit.gate_output(k).index;
    if (g.kind != GateKind::Semantic) {
      Gate copy{g.kind, {}, nullptr};
      for (WireId in : g.inputs) copy.inputs.push_back(map[in.index]);
      map[out] = b.add_gate(std::move(copy));
      continue;
    }
    const TruthTable& t = *g.table;
    std::vector<WireId> args;
    for (WireId in : g.inputs) args.push_back(map[in.index]);
    const std::uint64_t rows = std::uint64_t{1} << t.arity();

    if (t.arity() == 0) {
      for (std::size_t j = 0; j < t.width(); ++j) {
        map[out + j] = b.add_gate(Gate{t.at(0, j) ? GateKind::Const1 : GateKind::Const0, {}, nullptr});
      }
      continue;
    }

    detail::MintermBuilder minterms(b, args);
    for (std::size_t j = 0; j < t.width(); ++j) {
      std::vector<WireId> terms;
      for (std::uint64_t r = 0; r < rows; ++r) {
        if (t.at(r, j)) terms.push_back(minterms.minterm(r));
      }
      map[out + j] = terms.empty() ? b.add_gate(Gate{GateKind::Const0, {}, nullptr})
                                   : detail::balanced_or(b, std::move(terms));
    }
  }

  std::vector<WireId> outputs;
  for (WireId w : circuit.outputs()) outputs.push_back(map[w.index]);
  return std::move(b).build(std::move(outputs), circuit.name());
}

}  // namespace nccirc
