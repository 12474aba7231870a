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

// Independent oracles and generators for the test suites. Nothing here calls
// into the engines under test; the oracles use plain integer arithmetic and
// direct evaluation.

#include <cstdint>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "nccirc/circuit.hpp"

namespace nccirc::oracle {

/// Trial division: (prime, exponent) pairs, primes decreasing.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> trial_division(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> f;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    std::uint64_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return {f.rbegin(), f.rend()};
}

/// Sieve of Eratosthenes up to `limit` inclusive.
inline std::vector<bool> sieve(std::size_t limit) {
  std::vector<bool> prime(limit + 1, true);
  prime[0] = false;
  if (limit >= 1) prime[1] = false;
  for (std::size_t p = 2; p * p <= limit; ++p) {
    if (!prime[p]) continue;
    for (std::size_t q = p * p; q <= limit; q += p) prime[q] = false;
  }
  return prime;
}

/// Fixed points by evaluating c on every state, in index order.
inline std::vector<std::uint64_t> brute_force_fixed_points(const ClosedCircuit& closed) {
  std::vector<std::uint64_t> out;
  const std::size_t n = closed.state_width();
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const Bits s = bits_from_index(x, n);
    if (eval(closed.inner(), s) == s) out.push_back(x);
  }
  return out;
}

struct RandomCircuitOptions {
  std::size_t inputs = 4;
  std::size_t outputs = 4;
  std::size_t gates = 12;
  double semantic_rate = 0.0;  // chance a gate is a small truth table
};

/// Random valid circuit. Gate inputs come from any earlier wire; outputs from
/// any wire, biased toward late gates so that most of the circuit matters.
inline Circuit random_circuit(std::mt19937_64& rng, const RandomCircuitOptions& o) {
  std::vector<Gate> gates;
  std::size_t wires = o.inputs;
  auto pick = [&](std::size_t bound) {
    return WireId{static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng))};
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < o.gates; ++k) {
    Gate g;
    if (wires == 0) {
      g.kind = unit(rng) < 0.5 ? GateKind::Const0 : GateKind::Const1;
    } else if (unit(rng) < o.semantic_rate) {
      const std::size_t arity = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(3, wires))(rng);
      const std::size_t width = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
      std::vector<std::uint8_t> bits((std::size_t{1} << arity) * width);
      for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
      g.kind = GateKind::Semantic;
      g.table = std::make_shared<const TruthTable>(arity, width, std::move(bits));
      for (std::size_t a = 0; a < arity; ++a) g.inputs.push_back(pick(wires));
    } else {
      const int r = std::uniform_int_distribution<int>(0, 19)(rng);
      if (r < 7) {
        g.kind = GateKind::And;
      } else if (r < 14) {
        g.kind = GateKind::Or;
      } else if (r < 19) {
        g.kind = GateKind::Not;
      } else {
        g.kind = (rng() & 1u) ? GateKind::Const1 : GateKind::Const0;
      }
      const std::size_t arity = g.kind == GateKind::Not ? 1 : (g.kind == GateKind::And || g.kind == GateKind::Or) ? 2 : 0;
      for (std::size_t a = 0; a < arity; ++a) g.inputs.push_back(pick(wires));
    }
    wires += g.output_width();
    gates.push_back(std::move(g));
  }
  std::vector<WireId> outputs;
  for (std::size_t j = 0; j < o.outputs; ++j) {
    if (wires == 0) break;
    const std::size_t lo = wires > o.inputs + 4 && unit(rng) < 0.7 ? wires - std::min<std::size_t>(wires, 8) : 0;
    outputs.push_back(WireId{static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(lo, wires - 1)(rng))});
  }
  return Circuit(o.inputs, std::move(gates), std::move(outputs));
}

inline ClosedCircuit random_closed_circuit(std::mt19937_64& rng, std::size_t width, std::size_t gates,
                                           double semantic_rate = 0.0) {
  return ClosedCircuit(random_circuit(rng, {width, width, gates, semantic_rate}));
}

/// Closed circuit with a prescribed fixed-point set: c(y) = y on the listed
/// states, y with its last bit flipped on the others. One truth table.
inline ClosedCircuit closed_with_fixed_points(std::size_t width, const std::vector<std::uint64_t>& fixed) {
  std::vector<bool> is_fixed(std::size_t{1} << width, false);
  for (auto f : fixed) is_fixed[f] = true;
  CircuitBuilder b(width);
  auto table = TruthTable::from_function(width, width, [&](std::uint64_t x) {
    return bits_from_index(is_fixed[x] ? x : (x ^ 1u), width);
  });
  auto out = b.semantic(std::move(table), b.inputs());
  return ClosedCircuit(std::move(b).build(std::move(out)));
}

}  // namespace nccirc::oracle
