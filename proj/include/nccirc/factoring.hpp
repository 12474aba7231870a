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

// Factoring by a closed circuit. The state is one flag bit b followed by
// candidate bases a_1..a_n and exponents e_1..e_n. The circuit checks that
// the bases are non-increasing with no repeated base other than 1, that every
// base is prime or 1 (with exponent 1 on a base of 1), that every field lies
// in the domain K, and that prod a_i^e_i = N. On success it outputs the state
// with b = 0; on any failure it outputs the state with b negated. The only
// fixed point is therefore b = 0 with the canonical factorization, primes in
// strictly decreasing order padded with (1, 1) slots.

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nccirc/arith.hpp"
#include "nccirc/circuit.hpp"
#include "nccirc/fixedpoint.hpp"

namespace nccirc::factoring {

/// Domain K of every base and exponent field: {1..N-1} (PaperStrict) or
/// {1..N} (Extended, the only reading under which prime N has a fixed point).
enum class DomainMode { Extended, PaperStrict };

enum class LayoutKind { Paper, Compact };

inline const char* domain_mode_name(DomainMode m) {
  return m == DomainMode::Extended ? "extended" : "paper-strict";
}

inline DomainMode parse_domain_mode(const std::string& s) {
  if (s == "extended") return DomainMode::Extended;
  if (s == "paper-strict" || s == "strict") return DomainMode::PaperStrict;
  throw std::invalid_argument("unknown domain mode '" + s + "'");
}

inline constexpr std::uint64_t kMaxN = std::uint64_t{1} << 30;

/// Trial-division primality; fills the primality gate's truth table.
inline bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

struct FactoringLayout {
  std::uint64_t n_value = 2;  // N
  DomainMode mode = DomainMode::Extended;
  LayoutKind kind = LayoutKind::Paper;
  std::size_t slots = 1;
  std::size_t value_width = 1;
  std::size_t exponent_width = 1;

  std::uint64_t max_value() const { return mode == DomainMode::Extended ? n_value : n_value - 1; }
  std::size_t state_width() const { return 1 + slots * (value_width + exponent_width); }
  std::size_t base_offset(std::size_t i) const { return 1 + i * value_width; }
  std::size_t exponent_offset(std::size_t i) const { return 1 + slots * value_width + i * exponent_width; }

  /// n = ceil(log2 N) slots; every field wide enough for max K.
  static FactoringLayout paper(std::uint64_t n, DomainMode mode) {
    check_n(n);
    FactoringLayout l;
    l.n_value = n;
    l.mode = mode;
    l.kind = LayoutKind::Paper;
    l.slots = static_cast<std::size_t>(std::bit_width(n - 1));
    l.value_width = static_cast<std::size_t>(std::bit_width(l.max_value()));
    l.exponent_width = l.value_width;
    return l;
  }

  /// Slots bounded by the largest number of distinct primes of any M <= N,
  /// exponent width ceil(log2(log2 N)) + 1.
  static FactoringLayout compact(std::uint64_t n, DomainMode mode) {
    FactoringLayout l = paper(n, mode);
    l.kind = LayoutKind::Compact;
    std::size_t slots = 0;
    std::uint64_t primorial = 1;
    for (std::uint64_t p = 2;; ++p) {
      if (!is_prime(p)) continue;
      if (primorial * p > n) break;
      primorial *= p;
      ++slots;
    }
    l.slots = std::max<std::size_t>(slots, 1);
    std::size_t t = 0;  // smallest t with 2^(2^t) >= N
    while (t < 6 && (std::uint64_t{1} << t) < 64 && (std::uint64_t{1} << (std::uint64_t{1} << t)) < n) ++t;
    l.exponent_width = t + 1;
    return l;
  }

  static void check_n(std::uint64_t n) {
    if (n < 2) throw std::invalid_argument("factoring requires N >= 2, got " + std::to_string(n));
    if (n > kMaxN) throw std::invalid_argument("N too large for the factoring circuit");
  }
};

/// Canonical fixed-point layout decoded: (prime, exponent) pairs, primes
/// strictly decreasing.
struct Factorization {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> factors;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

struct DecodedState {
  bool flag = false;
  std::vector<std::uint64_t> bases;
  std::vector<std::uint64_t> exponents;
};

inline std::uint64_t read_field(const Bits& state, std::size_t offset, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < width; ++k) v = (v << 1) | state.at(offset + k);
  return v;
}

inline DecodedState decode_state(const FactoringLayout& layout, const Bits& state) {
  if (state.size() != layout.state_width()) throw std::invalid_argument("state width does not match layout");
  DecodedState d;
  d.flag = state[0] != 0;
  for (std::size_t i = 0; i < layout.slots; ++i) {
    d.bases.push_back(read_field(state, layout.base_offset(i), layout.value_width));
    d.exponents.push_back(read_field(state, layout.exponent_offset(i), layout.exponent_width));
  }
  return d;
}

inline Bits encode_state(const FactoringLayout& layout, const DecodedState& d) {
  Bits state(layout.state_width(), 0);
  state[0] = d.flag;
  auto put = [&](std::size_t offset, std::size_t width, std::uint64_t v) {
    if (width < 64 && (v >> width) != 0) throw std::invalid_argument("field value does not fit");
    for (std::size_t k = 0; k < width; ++k) state[offset + k] = (v >> (width - 1 - k)) & 1u;
  };
  for (std::size_t i = 0; i < layout.slots && i < d.bases.size(); ++i) {
    put(layout.base_offset(i), layout.value_width, d.bases[i]);
    put(layout.exponent_offset(i), layout.exponent_width, d.exponents.at(i));
  }
  return state;
}

/// Predicate on a `width`-bit MSB-first value: 1 exactly for primes. One
/// semantic gate whose table is filled by trial division.
inline Circuit primality_subcircuit(std::size_t width) {
  if (width == 0 || width > kMaxSemanticArity) {
    throw CircuitError("primality table width " + std::to_string(width) + " outside 1.." +
                       std::to_string(kMaxSemanticArity));
  }
  CircuitBuilder b(width);
  auto table = TruthTable::from_function(width, 1, [](std::uint64_t v) { return Bits{is_prime(v)}; });
  auto out = b.semantic(std::move(table), b.inputs());
  return std::move(b).build(out, "is_prime_" + std::to_string(width));
}

inline ClosedCircuit build_factoring_circuit(const FactoringLayout& layout) {
  using namespace arith;
  CircuitBuilder b(layout.state_width());
  const std::uint64_t max_k = layout.max_value();
  const Circuit prime = primality_subcircuit(layout.value_width);

  std::vector<Word> bases, exps;
  for (std::size_t i = 0; i < layout.slots; ++i) {
    bases.push_back(field_word(b, layout.base_offset(i), layout.value_width));
    exps.push_back(field_word(b, layout.exponent_offset(i), layout.exponent_width));
  }

  std::vector<WireId> pass;
  auto in_domain = [&](const Word& w) {
    const WireId nonzero = b.not_(is_zero(b, w));
    // a field narrower than max K cannot exceed it
    if (w.size() < 64 && (max_k >> w.size()) != 0) return nonzero;
    const WireId too_big = less_than(b, constant_word(b, max_k, w.size()), w);
    return b.and_(nonzero, b.not_(too_big));
  };
  for (std::size_t i = 0; i < layout.slots; ++i) {
    pass.push_back(in_domain(bases[i]));
    pass.push_back(in_domain(exps[i]));
  }

  // ordering: fail on a_i < a_{i+1} or on a repeated base other than 1
  std::vector<WireId> base_is_one;
  for (const Word& a : bases) base_is_one.push_back(equal_const(b, a, 1));
  for (std::size_t i = 0; i + 1 < layout.slots; ++i) {
    const WireId increasing = less_than(b, bases[i], bases[i + 1]);
    const WireId repeated = b.and_(b.not_(base_is_one[i]), equal(b, bases[i], bases[i + 1]));
    pass.push_back(b.not_(b.or_(increasing, repeated)));
  }

  // validity: exponent 1 on base 1, every base prime or 1
  for (std::size_t i = 0; i < layout.slots; ++i) {
    const WireId padded_wrong = b.and_(base_is_one[i], at_least_two(b, exps[i]));
    const WireId prime_i = b.inline_circuit(prime, msb_first(bases[i]))[0];
    const WireId not_prime_or_one = b.not_(b.or_(prime_i, base_is_one[i]));
    pass.push_back(b.not_(b.or_(padded_wrong, not_prime_or_one)));
  }

  // product. Any value of bit_width(N) or more bits differs from N, so the
  // running product only needs that many bits; the function is the same as
  // with the full 2 * value_width word and the circuit is about 4x smaller.
  const auto product_width = static_cast<std::size_t>(std::bit_width(layout.n_value));
  auto [product, overflow] = bounded_product(b, bases, exps, product_width);
  pass.push_back(b.and_(b.not_(overflow), equal_const(b, product, layout.n_value)));

  const WireId ok = b.and_all(pass);
  const WireId flag = b.input(0);
  std::vector<WireId> outputs;
  outputs.push_back(b.and_(b.not_(ok), b.not_(flag)));  // ok ? 0 : !b
  for (std::size_t i = 1; i < layout.state_width(); ++i) outputs.push_back(b.input(i));
  return ClosedCircuit(std::move(b).build(std::move(outputs), "factor_" + std::to_string(layout.n_value)));
}

inline ClosedCircuit build_factoring_circuit(std::uint64_t n, DomainMode mode = DomainMode::Extended) {
  return build_factoring_circuit(FactoringLayout::paper(n, mode));
}

/// Strips (1, 1) padding from a decoded fixed point.
inline Factorization factorization_from_state(const FactoringLayout& layout, const Bits& state) {
  const DecodedState d = decode_state(layout, state);
  Factorization f;
  for (std::size_t i = 0; i < layout.slots; ++i) {
    if (d.bases[i] != 1) f.factors.emplace_back(d.bases[i], d.exponents[i]);
  }
  return f;
}

struct FactorizeOptions {
  DomainMode mode = DomainMode::Extended;
  LayoutKind layout = LayoutKind::Paper;
  std::optional<Engine> engine;        // default: exhaustive up to 20 state bits, else CnfCount
  EngineOptions engine_options;
};

struct FactorizeResult {
  Factorization factorization;
  ConsistencyReport report;
  FactoringLayout layout;
};

inline Engine default_factoring_engine(const FactoringLayout& layout) {
  return layout.state_width() <= 20 ? Engine::Exhaustive : Engine::CnfCount;
}

/// Builds C_N, certifies its unique fixed point with the chosen engine and
/// decodes it. A circuit without a unique fixed point (PaperStrict with prime
/// N) raises NotNCCircValid carrying the report.
inline FactorizeResult factorize(std::uint64_t n, const FactorizeOptions& options = {}) {
  const FactoringLayout layout = options.layout == LayoutKind::Paper ? FactoringLayout::paper(n, options.mode)
                                                                     : FactoringLayout::compact(n, options.mode);
  const ClosedCircuit closed = build_factoring_circuit(layout);
  const Engine engine = options.engine.value_or(default_factoring_engine(layout));
  ConsistencyReport report = check_consistency(closed, engine, options.engine_options);
  if (!report.consistent()) throw NotNCCircValid(std::move(report));
  FactorizeResult result{factorization_from_state(layout, *report.fixed_point), std::move(report), layout};
  return result;
}

}  // namespace nccirc::factoring
