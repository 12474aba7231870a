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

#include "nccirc/sat.hpp"

using namespace nccirc::sat;

namespace {

/// Brute-force satisfiability for small CNFs.
bool brute_force_sat(std::size_t vars, const std::vector<std::vector<Lit>>& clauses) {
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << vars); ++a) {
    bool all = true;
    for (const auto& c : clauses) {
      bool any = false;
      for (Lit l : c) any |= (((a >> l.var()) & 1u) != 0) != l.negated();
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

TEST(Sat, TrivialCases) {
  Solver s;
  const Var a = s.new_var(), b = s.new_var();
  s.add_clause({Lit::make(a), Lit::make(b)});
  s.add_clause({Lit::make(a, true)});
  ASSERT_EQ(s.solve(), Result::Sat);
  EXPECT_FALSE(s.model_value(a));
  EXPECT_TRUE(s.model_value(b));
  s.add_clause({Lit::make(b, true)});
  EXPECT_EQ(s.solve(), Result::Unsat);
}

TEST(Sat, Assumptions) {
  Solver s;
  const Var a = s.new_var(), b = s.new_var();
  s.add_clause({Lit::make(a, true), Lit::make(b)});
  const Lit assume_a[] = {Lit::make(a)};
  ASSERT_EQ(s.solve(assume_a), Result::Sat);
  EXPECT_TRUE(s.model_value(b));
  const Lit both[] = {Lit::make(a), Lit::make(b, true)};
  EXPECT_EQ(s.solve(both), Result::Unsat);
  EXPECT_EQ(s.solve(), Result::Sat);  // assumptions are not permanent
}

TEST(Sat, PigeonholeUnsat) {
  // 5 pigeons, 4 holes
  Solver s;
  const int P = 5, H = 4;
  std::vector<std::vector<Var>> x(P, std::vector<Var>(H));
  for (auto& row : x)
    for (auto& v : row) v = s.new_var();
  for (int p = 0; p < P; ++p) {
    std::vector<Lit> c;
    for (int h = 0; h < H; ++h) c.push_back(Lit::make(x[p][h]));
    s.add_clause(c);
  }
  for (int h = 0; h < H; ++h)
    for (int p = 0; p < P; ++p)
      for (int q = p + 1; q < P; ++q) s.add_clause({Lit::make(x[p][h], true), Lit::make(x[q][h], true)});
  EXPECT_EQ(s.solve(), Result::Unsat);
}

TEST(Sat, RandomThreeSatAgreesWithBruteForce) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 4 + trial % 9;
    const std::size_t m = static_cast<std::size_t>(4.3 * static_cast<double>(n)) + trial % 3;
    std::vector<std::vector<Lit>> clauses;
    Solver s;
    for (std::size_t v = 0; v < n; ++v) s.new_var();
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<Lit> c;
      for (int j = 0; j < 3; ++j) c.push_back(Lit::make(static_cast<Var>(rng() % n), rng() & 1u));
      clauses.push_back(c);
      s.add_clause(c);
    }
    const bool expected = brute_force_sat(n, clauses);
    const Result r = s.solve();
    ASSERT_EQ(r == Result::Sat, expected) << "trial " << trial;
    if (r == Result::Sat) {
      for (const auto& c : clauses) {
        bool any = false;
        for (Lit l : c) any |= s.model_value(l);
        ASSERT_TRUE(any);
      }
    }
  }
}

TEST(Sat, DeadlineGivesUnknownNotWrongAnswer) {
  Solver s;
  const int P = 10, H = 9;
  std::vector<std::vector<Var>> x(P, std::vector<Var>(H));
  for (auto& row : x)
    for (auto& v : row) v = s.new_var();
  for (int p = 0; p < P; ++p) {
    std::vector<Lit> c;
    for (int h = 0; h < H; ++h) c.push_back(Lit::make(x[p][h]));
    s.add_clause(c);
  }
  for (int h = 0; h < H; ++h)
    for (int p = 0; p < P; ++p)
      for (int q = p + 1; q < P; ++q) s.add_clause({Lit::make(x[p][h], true), Lit::make(x[q][h], true)});
  s.set_deadline(std::chrono::steady_clock::now() + std::chrono::milliseconds(50));
  EXPECT_NE(s.solve(), Result::Sat);
}
