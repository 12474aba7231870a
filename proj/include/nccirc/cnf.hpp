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

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nccirc/circuit.hpp"
#include "nccirc/sat.hpp"

namespace nccirc {

/// Tseitin encoding of a pure AND/OR/NOT/CONST circuit. NOT gates become
/// negated literals and constants are folded, so only AND/OR gates with two
/// non-constant inputs allocate a variable, and structurally equal AND
/// gates share one.
struct CircuitEncoding {
  std::vector<sat::Var> input_vars;
  std::vector<sat::Lit> wire_lits;
  sat::Lit true_lit;

  sat::Lit output(const Circuit& c, std::size_t j) const { return wire_lits[c.outputs()[j].index]; }
};

inline CircuitEncoding encode_circuit(sat::Solver& solver, const Circuit& circuit) {
  require_valid(circuit);
  if (circuit.has_semantic_gates()) {
    throw CircuitError("CNF encoding requires a circuit without semantic gates; apply lower() first");
  }
  using sat::Lit;
  CircuitEncoding enc;
  const sat::Var t = solver.new_var();
  enc.true_lit = Lit::make(t);
  solver.add_clause({enc.true_lit});
  const Lit false_lit = ~enc.true_lit;

  std::unordered_map<std::uint64_t, Lit> strash;  // (min lit, max lit) -> AND output
  enc.wire_lits.resize(circuit.wire_count());
  for (std::size_t i = 0; i < circuit.num_inputs(); ++i) {
    enc.input_vars.push_back(solver.new_var());
    enc.wire_lits[i] = Lit::make(enc.input_vars.back());
  }
  for (std::size_t k = 0; k < circuit.gates().size(); ++k) {
    const Gate& g = circuit.gates()[k];
    Lit& out = enc.wire_lits[circuit.gate_output(k).index];
    switch (g.kind) {
      case GateKind::Const0: out = false_lit; break;
      case GateKind::Const1: out = enc.true_lit; break;
      case GateKind::Not: out = ~enc.wire_lits[g.inputs[0].index]; break;
      case GateKind::And:
      case GateKind::Or: {
        const bool is_and = g.kind == GateKind::And;
        // OR(a, b) = ~AND(~a, ~b)
        Lit a = enc.wire_lits[g.inputs[0].index];
        Lit b = enc.wire_lits[g.inputs[1].index];
        if (!is_and) {
          a = ~a;
          b = ~b;
        }
        Lit z;
        if (a == false_lit || b == false_lit || a == ~b) {
          z = false_lit;
        } else if (a == enc.true_lit) {
          z = b;
        } else if (b == enc.true_lit || a == b) {
          z = a;
        } else {
          if (b.code < a.code) std::swap(a, b);
          const std::uint64_t key = (std::uint64_t{a.code} << 32) | b.code;
          auto [it, fresh] = strash.try_emplace(key);
          if (fresh) {
            it->second = Lit::make(solver.new_var());
            solver.add_clause({~it->second, a});
            solver.add_clause({~it->second, b});
            solver.add_clause({it->second, ~a, ~b});
          }
          z = it->second;
        }
        out = is_and ? z : ~z;
        break;
      }
      case GateKind::Semantic: break;  // rejected above
    }
  }
  return enc;
}

}  // namespace nccirc
