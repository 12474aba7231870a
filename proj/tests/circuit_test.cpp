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
#include <thread>

#include "nccirc/circuit.hpp"
#include "support.hpp"

using namespace nccirc;

namespace {

Circuit not_circuit() {
  CircuitBuilder b(1);
  return std::move(b).build({b.add_gate(Gate{GateKind::Not, {b.input(0)}, nullptr})});
}

Circuit identity(std::size_t n) {
  CircuitBuilder b(n);
  return std::move(b).build(b.inputs());
}

}  // namespace

TEST(Bits, StringRoundTrip) {
  EXPECT_EQ(to_string(bits_from_string("0110")), "0110");
  EXPECT_EQ(index_from_bits(bits_from_string("110")), 6u);
  EXPECT_EQ(to_string(bits_from_index(5, 4)), "0101");
  EXPECT_THROW(bits_from_string("01a"), std::invalid_argument);
  EXPECT_EQ(to_string(concat(bits_from_string("1"), bits_from_string("00"))), "100");
}

TEST(Validate, AcceptsMinimalNot) { EXPECT_TRUE(validate(not_circuit()).ok); }

TEST(Validate, ReportsArity) {
  Circuit c(2, {Gate{GateKind::And, {WireId{0}}, nullptr}}, {WireId{2}});
  const auto v = validate(c);
  ASSERT_FALSE(v.ok);
  EXPECT_EQ(v.message.rfind("arity", 0), 0u) << v.message;
  EXPECT_EQ(v.gate, 0u);
}

TEST(Validate, ReportsTopology) {
  Circuit c(1, {Gate{GateKind::Not, {WireId{2}}, nullptr}, Gate{GateKind::Not, {WireId{0}}, nullptr}}, {WireId{1}});
  const auto v = validate(c);
  ASSERT_FALSE(v.ok);
  EXPECT_EQ(v.message.rfind("topology", 0), 0u) << v.message;
}

TEST(Validate, ReportsDanglingAndTable) {
  Circuit dangling(1, {}, {WireId{3}});
  EXPECT_EQ(validate(dangling).message.rfind("dangling", 0), 0u);
  auto bad = std::make_shared<const TruthTable>(2, 1, std::vector<std::uint8_t>{0, 1, 1});
  Circuit table(2, {Gate{GateKind::Semantic, {WireId{0}, WireId{1}}, bad}}, {WireId{2}});
  EXPECT_EQ(validate(table).message.rfind("table", 0), 0u);
}

TEST(Eval, Examples) {
  EXPECT_EQ(to_string(eval(identity(3), bits_from_string("101"))), "101");
  EXPECT_EQ(to_string(eval(not_circuit(), bits_from_string("0"))), "1");
  CircuitBuilder b(2);
  const WireId a = b.and_(b.input(0), b.input(1));
  const WireId o = b.or_(b.input(0), b.input(1));
  const Circuit and_or = std::move(b).build({a, o});
  EXPECT_EQ(to_string(eval(and_or, bits_from_string("10"))), "01");
  EXPECT_THROW(eval(and_or, bits_from_string("1")), CircuitError);
}

TEST(Eval, SemanticMultiOutput) {
  CircuitBuilder b(2);
  // half adder as one table: (carry, sum)
  auto t = TruthTable::from_function(2, 2, [](std::uint64_t r) {
    return Bits{static_cast<std::uint8_t>(r == 3), static_cast<std::uint8_t>(r == 1 || r == 2)};
  });
  auto outs = b.semantic(std::move(t), b.inputs());
  const Circuit c = std::move(b).build(outs);
  for (std::uint64_t r = 0; r < 4; ++r) {
    const Bits out = eval(c, bits_from_index(r, 2));
    EXPECT_EQ(index_from_bits(out), (r >> 1) + (r & 1)) << r;
  }
}

TEST(Close, Examples) {
  const ClosedCircuit n = close(not_circuit());
  EXPECT_EQ(to_string(n.step(bits_from_string("0"))), "1");
  CircuitBuilder b(2);
  const WireId a = b.and_(b.input(0), b.input(1));
  EXPECT_THROW(close(std::move(b).build({a})), CircuitError);
  try {
    CircuitBuilder b2(2);
    close(std::move(b2).build({b2.input(0)}));
    FAIL();
  } catch (const CircuitError& e) {
    EXPECT_NE(std::string(e.what()).find("not closable"), std::string::npos);
  }
  const ClosedCircuit id = close(identity(3));
  EXPECT_EQ(to_string(id.step(bits_from_string("110"))), "110");
}

TEST(Builder, FoldsConstants) {
  CircuitBuilder b(1);
  const WireId one = b.constant(true);
  EXPECT_EQ(b.and_(b.input(0), one), b.input(0));
  EXPECT_EQ(b.known(b.or_(b.input(0), one)), std::optional<bool>(true));
  EXPECT_EQ(b.known(b.and_(b.input(0), b.constant(false))), std::optional<bool>(false));
}

TEST(Builder, WideTreesAndXor) {
  for (std::size_t n = 1; n <= 6; ++n) {
    CircuitBuilder b(n);
    const auto all = b.and_all(b.inputs());
    const auto any = b.or_all(b.inputs());
    WireId parity = b.constant(false);
    for (auto w : b.inputs()) parity = b.xor_(parity, w);
    const Circuit c = std::move(b).build({all, any, parity});
    for (std::uint64_t x = 0; x < (1u << n); ++x) {
      const Bits out = eval(c, bits_from_index(x, n));
      EXPECT_EQ(out[0], x == (1u << n) - 1);
      EXPECT_EQ(out[1], x != 0);
      EXPECT_EQ(out[2], std::popcount(x) & 1);
    }
  }
}

TEST(Builder, BindPrefixFixesLeadingInputs) {
  CircuitBuilder b(3);
  const WireId o = b.and_(b.xor_(b.input(0), b.input(1)), b.input(2));
  const Circuit c = std::move(b).build({o});
  const Circuit bound = bind_prefix(c, bits_from_string("10"));
  ASSERT_EQ(bound.num_inputs(), 1u);
  EXPECT_EQ(to_string(eval(bound, bits_from_string("1"))), "1");
  EXPECT_EQ(to_string(eval(bound, bits_from_string("0"))), "0");
}

TEST(Evaluator, LanesMatchScalar) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Circuit c = oracle::random_circuit(rng, {6, 4, 30, 0.2});
    ASSERT_TRUE(validate(c).ok) << validate(c).message;
    const Evaluator ev(c);
    std::vector<std::uint64_t> in(6, 0), out(4, 0);
    for (std::uint64_t x = 0; x < 64; ++x) {
      for (std::size_t i = 0; i < 6; ++i) in[i] |= ((x >> (5 - i)) & 1u) << x;
    }
    std::vector<std::uint64_t> lanes;
    ev.eval_lanes(in, out, lanes);
    for (std::uint64_t x = 0; x < 64; ++x) {
      const Bits scalar = eval(c, bits_from_index(x, 6));
      for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(scalar[j], (out[j] >> x) & 1u);
    }
  }
}

TEST(Evaluator, PureAcrossThreads) {
  std::mt19937_64 rng(11);
  const Circuit c = oracle::random_circuit(rng, {10, 10, 200, 0.1});
  std::vector<Bits> expected;
  for (std::uint64_t x = 0; x < 1024; ++x) expected.push_back(eval(c, bits_from_index(x, 10)));
  std::vector<int> mismatches(4, 0);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (std::uint64_t x = 0; x < 1024; ++x) mismatches[t] += eval(c, bits_from_index(x, 10)) != expected[x];
    });
  }
  for (auto& th : threads) th.join();
  for (int m : mismatches) EXPECT_EQ(m, 0);
}

TEST(Close, StepMatchesEvalExhaustively) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ClosedCircuit cc = oracle::random_closed_circuit(rng, 8, 40, 0.1);
    for (std::uint64_t x = 0; x < 256; ++x) {
      const Bits s = bits_from_index(x, 8);
      EXPECT_EQ(cc.step(s), eval(cc.inner(), s));
    }
  }
}
