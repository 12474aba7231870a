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

#include "nccirc/ctc.hpp"

using namespace nccirc;
using namespace nccirc::ctc;

namespace {

const std::vector<PartySpec> kOne{{1, 1}};
const std::vector<PartySpec> kTwo{{1, 1}, {1, 1}};

std::vector<LocalOperation> ops(const std::vector<PartySpec>& parties, const std::vector<Table>& f) {
  return local_operations(parties, f);
}

// The per-f verdict through the closed-circuit path.
Verdict closed_verdict(const ProcessFunction& w, const std::vector<Table>& f) {
  return check_consistency(to_closed_circuit(w, ops(w.parties, f))).verdict;
}

}  // namespace

TEST(Tables, DescribeAndString) {
  EXPECT_EQ(describe_local({0, 0}, 1, 1), "const0");
  EXPECT_EQ(describe_local({0, 1}, 1, 1), "id");
  EXPECT_EQ(describe_local({1, 0}, 1, 1), "not");
  EXPECT_EQ(describe_local({1, 1}, 1, 1), "const1");
  EXPECT_EQ(table_string({3, 0, 1, 2}, 2), "11000110");
  const Circuit c = circuit_from_table(2, 2, {3, 0, 1, 2});
  EXPECT_EQ(tabulate(c), (Table{3, 0, 1, 2}));
}

TEST(Space, LexicographicDecode) {
  const LocalOperationSpace space(kTwo);
  EXPECT_EQ(space.size(), 16u);
  EXPECT_EQ(space.decode(0), (std::vector<Table>{{0, 0}, {0, 0}}));
  EXPECT_EQ(space.decode(1), (std::vector<Table>{{0, 0}, {0, 1}}));
  EXPECT_EQ(space.decode(4), (std::vector<Table>{{0, 1}, {0, 0}}));
  EXPECT_EQ(*space.identity(), (std::vector<Table>{{0, 1}, {0, 1}}));
  EXPECT_THROW(space.require_budget(8), BudgetExceeded);
}

TEST(CheckProcess, OnePartyIdentity) {
  // const0 is checked first (unique fixed point 0); id is the first violation
  const auto r = check_process_table(kOne, {0, 1});
  ASSERT_FALSE(r.consistent());
  EXPECT_EQ(describe_local(r.violation->tables[0], 1, 1), "id");
  EXPECT_EQ(r.violation->kind, Verdict::MultipleFixedPoints);
  EXPECT_EQ(r.violation->index, 1u);
  // NOT is the grandfather antinomy
  const ProcessFunction w = process_from_table(kOne, {0, 1});
  EXPECT_EQ(closed_verdict(w, {{1, 0}}), Verdict::NoFixedPoint);
}

TEST(CheckProcess, OnePartyConstant) {
  EXPECT_TRUE(check_process_table(kOne, {0, 0}).consistent());
  EXPECT_TRUE(check_process_table(kOne, {1, 1}).consistent());
  EXPECT_FALSE(check_process_table(kOne, {1, 0}).consistent());
}

TEST(CheckProcess, TwoPartySwap) {
  // w(o1 o2) = o2 o1
  const auto r = check_process_table(kTwo, {0, 2, 1, 3});
  ASSERT_FALSE(r.consistent());
  EXPECT_EQ(r.violation->tables, (std::vector<Table>{{0, 1}, {0, 1}}));
  EXPECT_EQ(r.violation->kind, Verdict::MultipleFixedPoints);
}

TEST(CheckProcess, CircuitAndTableAgree) {
  const ProcessFunction w = process_from_table(kTwo, {0, 2, 1, 3});
  EXPECT_EQ(check_process_function(w).violation->index, check_process_table(kTwo, {0, 2, 1, 3}).violation->index);
}

TEST(CheckProcess, BudgetErrorStatesRequirement) {
  const std::vector<PartySpec> big{{3, 3}, {3, 3}};
  try {
    check_process_table(big, Table(64, 0), 1000);
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("2^48"), std::string::npos) << e.what();
  }
}

TEST(ClosedCircuit, Examples) {
  const ProcessFunction zero = process_from_table(kTwo, {0, 0, 0, 0});
  const LocalOperationSpace space(kTwo);
  for (std::uint64_t k = 0; k < space.size(); ++k) {
    const auto r = check_consistency(to_closed_circuit(zero, ops(kTwo, space.decode(k))));
    ASSERT_TRUE(r.consistent());
    EXPECT_EQ(to_string(*r.fixed_point), "00");
  }
  const ProcessFunction id = process_from_table(kOne, {0, 1});
  EXPECT_EQ(closed_verdict(id, {{1, 0}}), Verdict::NoFixedPoint);
}

TEST(ClosedCircuit, WidthMismatch) {
  const ProcessFunction w = process_from_table(kTwo, {0, 0, 0, 0});
  EXPECT_THROW(to_closed_circuit(w, ops(kOne, {{0, 1}})), CircuitError);
  auto f = ops(kTwo, {{0, 1}, {0, 1}});
  f[1].circuit = circuit_from_table(2, 1, {0, 1, 1, 0});
  EXPECT_THROW(to_closed_circuit(w, f), CircuitError);
}

// Consistency of w for all f agrees with the closed-circuit engine per f.
TEST(CheckProcess, AgreesWithClosedCircuitsRandom) {
  std::mt19937_64 rng(61);
  const std::vector<std::vector<PartySpec>> setups{{{1, 1}, {1, 1}, {1, 1}}, {{2, 1}, {1, 2}}, {{2, 2}, {1, 1}}};
  for (const auto& parties : setups) {
    const std::size_t in = total_input_bits(parties), out = total_output_bits(parties);
    const LocalOperationSpace space(parties);
    const Composition comp(parties);
    for (int trial = 0; trial < 20; ++trial) {
      Table w(std::size_t{1} << out);
      for (auto& v : w) v = static_cast<std::uint32_t>(rng() % (1u << in));
      const ProcessFunction pw = process_from_table(parties, w);
      const auto verdict = check_process_table(parties, w);
      for (std::uint64_t k = 0; k < space.size(); k += 1 + rng() % 7) {
        const auto f = space.decode(k);
        const auto fixed = comp.fixed_points(w, f);
        const Verdict expected = fixed.size() == 1 ? Verdict::Consistent
                                 : fixed.empty()   ? Verdict::NoFixedPoint
                                                   : Verdict::MultipleFixedPoints;
        ASSERT_EQ(closed_verdict(pw, f), expected);
        if (verdict.consistent()) {
          ASSERT_EQ(expected, Verdict::Consistent);
        }
        if (!verdict.consistent() && k < verdict.violation->index) {
          ASSERT_EQ(expected, Verdict::Consistent);
        }
      }
    }
  }
}

TEST(CheckProcess, ConstantsAreConsistentAndOrdered) {
  const std::vector<PartySpec> parties{{1, 1}, {2, 1}};
  for (std::uint32_t c = 0; c < 8; ++c) {
    const Table w(4, c);
    EXPECT_TRUE(check_process_table(parties, w).consistent());
    const auto order = check_causal_order_table(parties, w);
    ASSERT_TRUE(order.ordered());
    EXPECT_EQ(*order.order, (std::vector<std::size_t>{0, 1}));
  }
}

TEST(Decide, Examples) {
  const std::vector<PartySpec> one2{{2, 2}};
  const auto f = ops(one2, {{3, 2, 1, 0}});
  const auto acc = decide_ctc(process_from_table(one2, Table(4, 2)), f);
  EXPECT_TRUE(acc.accept);
  EXPECT_EQ(to_string(acc.z), "0");
  const auto rej = decide_ctc(process_from_table(one2, Table(4, 1)), f);
  EXPECT_FALSE(rej.accept);
  EXPECT_EQ(to_string(rej.z), "1");
}

TEST(Decide, SwapIsInvalid) {
  const ProcessFunction swap = process_from_table(kTwo, {0, 2, 1, 3});
  try {
    decide_ctc(swap, ops(kTwo, {{0, 1}, {0, 1}}));
    FAIL();
  } catch (const InvalidAlgorithm& e) {
    EXPECT_EQ(e.report().verdict, Verdict::MultipleFixedPoints);
  }
}

TEST(Decide, FullCheckCanBeWaived) {
  // swap with (const1, id): unique fixed point 11, but swap itself is inconsistent
  const ProcessFunction swap = process_from_table(kTwo, {0, 2, 1, 3});
  const auto f = ops(kTwo, {{1, 1}, {0, 1}});
  EXPECT_THROW(decide_ctc(swap, f), InvalidAlgorithm);
  const auto d = decide_ctc(swap, f, true);
  EXPECT_TRUE(d.accept);
  EXPECT_TRUE(d.z.empty());
  EXPECT_EQ(to_string(d.fixed_point), "11");
}

TEST(CausalOrder, Examples) {
  // i1 constant, i2 = o1
  const auto r = check_causal_order_table(kTwo, {0, 0, 1, 1});
  ASSERT_TRUE(r.ordered());
  EXPECT_EQ(*r.order, (std::vector<std::size_t>{0, 1}));
  // i1 = o2, i2 constant: party 2 first
  const auto back = check_causal_order_table(kTwo, {0, 2, 0, 2});
  ASSERT_TRUE(back.ordered());
  EXPECT_EQ(*back.order, (std::vector<std::size_t>{1, 0}));
  // swap: each reads the other
  EXPECT_FALSE(check_causal_order_table(kTwo, {0, 2, 1, 3}).ordered());
  // self-dependence
  EXPECT_FALSE(check_causal_order_table(kOne, {0, 1}).ordered());
}

TEST(Search, OneAndTwoPartiesFindNothing) {
  const auto one = search_noncausal_process(1, 1);
  EXPECT_FALSE(one.process.has_value());
  EXPECT_EQ(one.candidates_examined, 4u);
  const auto two = search_noncausal_process(2, 1);
  EXPECT_FALSE(two.process.has_value());
  EXPECT_EQ(two.candidates_examined, 256u);
}

TEST(Search, ThreePartiesFindsNonCausalProcess) {
  const auto r = search_noncausal_process(3, 1);
  ASSERT_TRUE(r.process.has_value());
  EXPECT_TRUE(check_process_function(*r.process).consistent());
  EXPECT_FALSE(check_causal_order(*r.process).ordered());
  EXPECT_EQ(tabulate(r.process->map), *r.table);
}

TEST(Search, BudgetRefusesHugeSpaces) { EXPECT_THROW(search_noncausal_process(2, 2, 1000), BudgetExceeded); }
