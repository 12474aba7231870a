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

#include <gtest/gtest.h>

#include <random>

#include "nccirc/circuit.hpp"
#include "nccirc/lower.hpp"
#include "support.hpp"

using namespace nccirc;

namespace {

bool is_plain(const Circuit& c) { return !c.has_semantic_gates(); }

void expect_equivalent(const Circuit& a, const Circuit& b) {
  ASSERT_EQ(a.num_inputs(), b.num_inputs());
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << a.num_inputs()); ++x) {
    const Bits in = bits_from_index(x, a.num_inputs());
    ASSERT_EQ(eval(a, in), eval(b, in)) << "input " << to_string(in);
  }
}

Circuit single_table(std::size_t arity, std::size_t width, std::function<Bits(std::uint64_t)> fn) {
  CircuitBuilder b(arity);
  auto out = b.semantic(TruthTable::from_function(arity, width, fn), b.inputs());
  return std::move(b).build(out);
}

}  // namespace

TEST(Lower, PlainCircuitUnchanged) {
  CircuitBuilder b(2);
  const WireId o = b.and_(b.input(0), b.not_(b.input(1)));
  const Circuit c = std::move(b).build({o});
  EXPECT_EQ(lower(c), c);
}

TEST(Lower, Xor) {
  const Circuit x = single_table(2, 1, [](std::uint64_t r) { return Bits{static_cast<std::uint8_t>(std::popcount(r) & 1)}; });
  const Circuit l = lower(x);
  EXPECT_TRUE(is_plain(l));
  expect_equivalent(x, l);
}

TEST(Lower, PrimeIndexTable) {
  // 3-bit "is prime" over 0..7: 2, 3, 5, 7
  const auto primes = oracle::sieve(7);
  const Circuit p = single_table(3, 1, [&](std::uint64_t r) { return Bits{primes[r] ? std::uint8_t{1} : std::uint8_t{0}}; });
  const Circuit l = lower(p);
  EXPECT_TRUE(is_plain(l));
  for (std::uint64_t r = 0; r < 8; ++r) EXPECT_EQ(eval(l, bits_from_index(r, 3))[0], primes[r]) << r;
}

TEST(Lower, ConstantAndZeroArityTables) {
  const Circuit zero = single_table(3, 2, [](std::uint64_t) { return Bits{0, 0}; });
  expect_equivalent(zero, lower(zero));
  CircuitBuilder b(1);
  auto k = b.semantic(TruthTable(0, 2, {1, 0}), {});
  const Circuit c = std::move(b).build({k[0], k[1], b.input(0)});
  const Circuit l = lower(c);
  EXPECT_TRUE(is_plain(l));
  expect_equivalent(c, l);
}

TEST(Lower, RandomCircuitsExhaustive) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const Circuit c = oracle::random_circuit(rng, {n, 3, 25, 0.4});
    const Circuit l = lower(c);
    ASSERT_TRUE(validate(l).ok);
    ASSERT_TRUE(is_plain(l));
    expect_equivalent(c, l);
  }
}

TEST(Lower, WideTablesSampled) {
  std::mt19937_64 rng(5);
  // arity 12 table on a 24-input circuit, checked on random samples
  CircuitBuilder b(24);
  std::vector<std::uint8_t> bits(std::size_t{1} << 12);
  for (auto& v : bits) v = rng() & 1u;
  std::vector<WireId> args;
  for (std::size_t i = 0; i < 12; ++i) args.push_back(b.input(2 * i));
  auto t = b.semantic(TruthTable(12, 1, bits), args);
  const WireId o = b.xor_(t[0], b.input(1));
  const Circuit c = std::move(b).build({o});
  const Circuit l = lower(c);
  ASSERT_TRUE(is_plain(l));
  const Evaluator ec(c), el(l);
  std::vector<std::uint8_t> s1, s2;
  for (int k = 0; k < 20000; ++k) {
    const std::uint64_t x = rng() & ((std::uint64_t{1} << 24) - 1);
    ASSERT_EQ(ec.eval_index(x, s1), el.eval_index(x, s2));
  }
}
