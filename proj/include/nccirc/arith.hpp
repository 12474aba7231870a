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

// Word-level arithmetic over CircuitBuilder. Words are LSB-first (word[0] is
// the least significant bit); fields in a state bit string are MSB-first, use
// field_word() to convert.

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nccirc/circuit.hpp"

namespace nccirc::arith {

inline constexpr std::size_t kMaxWordWidth = 62;

inline void check_width(std::size_t width) {
  if (width == 0 || width > kMaxWordWidth) {
    throw CircuitError("word width " + std::to_string(width) + " outside the supported range 1.." +
                       std::to_string(kMaxWordWidth));
  }
}

/// LSB-first word for the MSB-first field of `width` bits starting at `offset`.
inline Word field_word(const CircuitBuilder& b, std::size_t offset, std::size_t width) {
  Word w(width);
  for (std::size_t k = 0; k < width; ++k) w[k] = b.input(offset + width - 1 - k);
  return w;
}

/// MSB-first wire list (state/field order) for an LSB-first word.
inline std::vector<WireId> msb_first(const Word& w) { return {w.rbegin(), w.rend()}; }

inline Word constant_word(CircuitBuilder& b, std::uint64_t value, std::size_t width) {
  Word w(width);
  for (std::size_t k = 0; k < width; ++k) w[k] = b.constant(k < 64 && ((value >> k) & 1u));
  return w;
}

inline Word zero_extend(CircuitBuilder& b, Word w, std::size_t width) {
  while (w.size() < width) w.push_back(b.constant(false));
  return w;
}

/// a < c (unsigned); operands are zero-extended to a common width.
inline WireId less_than(CircuitBuilder& b, Word a, Word c) {
  const std::size_t width = std::max(a.size(), c.size());
  a = zero_extend(b, std::move(a), width);
  c = zero_extend(b, std::move(c), width);
  WireId lt = b.constant(false);
  for (std::size_t i = 0; i < width; ++i) {
    const WireId here = b.and_(b.not_(a[i]), c[i]);
    lt = b.or_(here, b.and_(b.xnor_(a[i], c[i]), lt));
  }
  return lt;
}

inline WireId equal(CircuitBuilder& b, Word a, Word c) {
  const std::size_t width = std::max(a.size(), c.size());
  a = zero_extend(b, std::move(a), width);
  c = zero_extend(b, std::move(c), width);
  std::vector<WireId> same;
  for (std::size_t i = 0; i < width; ++i) same.push_back(b.xnor_(a[i], c[i]));
  return b.and_all(same);
}

inline WireId equal_const(CircuitBuilder& b, const Word& a, std::uint64_t value) {
  if (a.size() < 64 && (value >> a.size()) != 0) return b.constant(false);
  std::vector<WireId> lits;
  for (std::size_t k = 0; k < a.size(); ++k) lits.push_back(((value >> k) & 1u) ? a[k] : b.not_(a[k]));
  return b.and_all(lits);
}

inline WireId is_zero(CircuitBuilder& b, const Word& a) { return b.not_(b.or_all(a)); }

/// a >= 2, i.e. some bit above the least significant one is set.
inline WireId at_least_two(CircuitBuilder& b, const Word& a) {
  return b.or_all(std::span<const WireId>(a).subspan(a.empty() ? 0 : 1));
}

/// Ripple-carry sum of equal-width words; returns (sum, carry out).
inline std::pair<Word, WireId> add(CircuitBuilder& b, const Word& x, const Word& y, WireId carry) {
  Word sum(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const WireId t = b.xor_(x[i], y[i]);
    sum[i] = b.xor_(t, carry);
    carry = b.or_(b.and_(x[i], y[i]), b.and_(t, carry));
  }
  return {std::move(sum), carry};
}

struct BoundedWord {
  Word value;       // low `width` bits
  WireId overflow;  // true value >= 2^width
};

/// x * y truncated to `width` bits, with a flag for products that do not fit.
/// Only the partial products below 2^width are summed; any partial product
/// at or above it, and any carry out of the top bit, raises the flag.
inline BoundedWord multiply_bounded(CircuitBuilder& b, Word x, Word y, std::size_t width) {
  check_width(width);
  x = zero_extend(b, std::move(x), width);
  y = zero_extend(b, std::move(y), width);
  std::vector<WireId> high(x.size());  // high[k] = OR of x bits at positions >= k
  std::vector<WireId> overflow_terms;
  for (std::size_t k = x.size(); k-- > 0;) {
    high[k] = k + 1 < x.size() ? b.or_(x[k], high[k + 1]) : x[k];
  }
  for (std::size_t j = width; j < x.size(); ++j) overflow_terms.push_back(x[j]);
  for (std::size_t j = width; j < y.size(); ++j) overflow_terms.push_back(y[j]);

  Word acc(width);
  for (std::size_t k = 0; k < width; ++k) acc[k] = b.and_(x[k], y[0]);
  for (std::size_t i = 1; i < width; ++i) {
    overflow_terms.push_back(b.and_(y[i], high[width - i]));
    Word row(width - i), tail(acc.begin() + static_cast<std::ptrdiff_t>(i), acc.end());
    for (std::size_t k = 0; k < width - i; ++k) row[k] = b.and_(x[k], y[i]);
    auto [sum, carry] = add(b, tail, row, b.constant(false));
    std::copy(sum.begin(), sum.end(), acc.begin() + static_cast<std::ptrdiff_t>(i));
    overflow_terms.push_back(carry);
  }
  return {std::move(acc), b.or_all(overflow_terms)};
}

/// sel ? w : 1
inline Word select_or_one(CircuitBuilder& b, WireId sel, const Word& w) {
  Word out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out[k] = k == 0 ? b.or_(b.not_(sel), w[0]) : b.and_(sel, w[k]);
  return out;
}

/// base^exponent in `width` bits with a sticky overflow flag, by repeated
/// squaring. Squares base^(2^j) with 2^j >= width overflow whenever base >= 2,
/// so those exponent bits only contribute a flag (or a factor of base when
/// base <= 1).
inline BoundedWord power_bounded(CircuitBuilder& b, const Word& base, const Word& exponent, std::size_t width) {
  check_width(width);
  Word sq = zero_extend(b, base, width);
  if (base.size() > width) throw CircuitError("power_bounded: base wider than result");
  WireId sq_overflow = b.constant(false);
  const WireId ge2 = at_least_two(b, base);

  std::vector<Word> factors;
  std::vector<WireId> overflow_terms;
  std::vector<WireId> big_bits;
  for (std::size_t j = 0; j < exponent.size(); ++j) {
    if (j >= 63 || (std::uint64_t{1} << j) >= width) {
      big_bits.push_back(exponent[j]);
      continue;
    }
    if (j > 0) {
      auto [next, ov] = multiply_bounded(b, sq, sq, width);
      sq = std::move(next);
      sq_overflow = b.or_(sq_overflow, ov);
    }
    factors.push_back(select_or_one(b, exponent[j], sq));
    overflow_terms.push_back(b.and_(exponent[j], sq_overflow));
  }

  Word acc = constant_word(b, 1, width);
  for (const Word& f : factors) {
    auto [next, ov] = multiply_bounded(b, acc, f, width);
    acc = std::move(next);
    overflow_terms.push_back(ov);
  }
  if (!big_bits.empty()) {
    // base >= 2 overflows; base 1 leaves acc alone; base 0 zeroes it
    const WireId any_big = b.or_all(big_bits);
    overflow_terms.push_back(b.and_(any_big, ge2));
    const WireId keep = b.not_(b.and_(any_big, is_zero(b, base)));
    for (WireId& w : acc) w = b.and_(w, keep);
  }
  return {std::move(acc), b.or_all(overflow_terms)};
}

/// prod_i bases[i]^exponents[i] in `width` bits with a sticky overflow flag.
inline BoundedWord bounded_product(CircuitBuilder& b, std::span<const Word> bases, std::span<const Word> exponents,
                                   std::size_t width) {
  if (bases.size() != exponents.size()) throw CircuitError("bounded_product: base/exponent count mismatch");
  Word acc = constant_word(b, 1, width);
  std::vector<WireId> overflow_terms;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    auto [term, term_ov] = power_bounded(b, bases[i], exponents[i], width);
    auto [next, ov] = multiply_bounded(b, acc, term, width);
    acc = std::move(next);
    overflow_terms.push_back(term_ov);
    overflow_terms.push_back(ov);
  }
  return {std::move(acc), b.or_all(overflow_terms)};
}

/// Standalone predicate a < b on two MSB-first `width`-bit fields (a first).
inline Circuit comparator(std::size_t width) {
  check_width(width);
  CircuitBuilder b(2 * width);
  const WireId lt = less_than(b, field_word(b, 0, width), field_word(b, width, width));
  return std::move(b).build({lt}, "less_than_" + std::to_string(width));
}

/// Standalone predicate a = b on two MSB-first `width`-bit fields.
inline Circuit equality(std::size_t width) {
  check_width(width);
  CircuitBuilder b(2 * width);
  const WireId eq = equal(b, field_word(b, 0, width), field_word(b, width, width));
  return std::move(b).build({eq}, "equal_" + std::to_string(width));
}

/// Standalone product circuit. Inputs: `slots` bases of `value_width` bits,
/// then `slots` exponents of `exponent_width` bits, all MSB-first. Outputs: the
/// product in 2 * value_width bits (MSB-first), then the overflow flag.
inline Circuit bounded_product_circuit(std::size_t slots, std::size_t value_width, std::size_t exponent_width) {
  check_width(2 * value_width);
  CircuitBuilder b(slots * (value_width + exponent_width));
  std::vector<Word> bases, exps;
  for (std::size_t i = 0; i < slots; ++i) bases.push_back(field_word(b, i * value_width, value_width));
  for (std::size_t i = 0; i < slots; ++i) {
    exps.push_back(field_word(b, slots * value_width + i * exponent_width, exponent_width));
  }
  auto [value, overflow] = bounded_product(b, bases, exps, 2 * value_width);
  auto outputs = msb_first(value);
  outputs.push_back(overflow);
  return std::move(b).build(std::move(outputs), "bounded_product");
}

}  // namespace nccirc::arith
