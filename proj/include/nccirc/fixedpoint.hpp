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

// Fixed points of closed circuits and the uniqueness check.
//
// Three engines compute the set {y : c(y) = y}:
//   Exhaustive       64-lane bit-parallel sweep over all states in index order.
//   FunctionalGraph  walks the functional graph of c with a visited bitmap,
//                    evaluating every state once on the scalar path.
//   CnfCount         Tseitin encoding of c(y) = y, models enumerated with
//                    blocking clauses; the only engine usable beyond a few
//                    dozen state bits.
// All engines report fixed points in lexicographic order, so results do not
// depend on the engine, the worker count or the solver's search order.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "nccirc/circuit.hpp"
#include "nccirc/cnf.hpp"
#include "nccirc/lower.hpp"
#include "nccirc/errors.hpp"
#include "nccirc/report.hpp"
#include "nccirc/sat.hpp"

namespace nccirc {

inline constexpr std::uint64_t kNoLimit = std::numeric_limits<std::uint64_t>::max() - 1;

struct EngineOptions {
  std::size_t max_state_bits = 28;  // Exhaustive and FunctionalGraph capacity
  std::optional<std::chrono::milliseconds> timeout;  // CnfCount only
  unsigned workers = 1;             // Exhaustive only
  std::size_t trace_length = 8;
};

struct FixedPointCount {
  enum class Status { Exact, Saturated, Timeout };
  std::uint64_t count = 0;
  Status status = Status::Exact;
};

/// A closed circuit that fails the uniqueness condition where one is required.
class NotNCCircValid : public std::runtime_error {
 public:
  explicit NotNCCircValid(ConsistencyReport report)
      : std::runtime_error(std::string("not an NCCirc-valid circuit: ") + verdict_name(report.verdict)),
        report_(std::move(report)) {}
  const ConsistencyReport& report() const { return report_; }

 private:
  ConsistencyReport report_;
};

namespace detail {

inline void require_capacity(const ClosedCircuit& closed, const EngineOptions& opts, Engine engine) {
  const std::size_t cap = std::min<std::size_t>(opts.max_state_bits, 40);
  if (closed.state_width() > cap) {
    throw CapacityError(std::string("state width ") + std::to_string(closed.state_width()) +
                        " exceeds " + engine_name(engine) + " engine capacity " +
                        std::to_string(cap) + "; use CnfCount");
  }
}

// Fixed-point indices in [begin_block, end_block) blocks of 64 states, in
// increasing order, at most max_found of them.
inline std::vector<std::uint64_t> sweep_blocks(const Evaluator& ev, std::size_t n, std::uint64_t begin_block,
                                               std::uint64_t end_block, std::uint64_t max_found) {
  static constexpr std::uint64_t kLowPatterns[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<std::uint64_t> in(n), out(n), lanes;
  std::vector<std::uint64_t> found;
  for (std::uint64_t block = begin_block; block < end_block && found.size() < max_found; ++block) {
    const std::uint64_t base = block * 64;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t bit = n - 1 - i;  // weight of input i in the state index
      in[i] = bit < 6 ? kLowPatterns[bit] : (((base >> bit) & 1u) ? ~std::uint64_t{0} : 0);
    }
    ev.eval_lanes(in, out, lanes);
    std::uint64_t fixed = total - base >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (total - base)) - 1);
    for (std::size_t i = 0; i < n; ++i) fixed &= ~(in[i] ^ out[i]);
    while (fixed && found.size() < max_found) {
      const int lane = std::countr_zero(fixed);
      found.push_back(base + static_cast<std::uint64_t>(lane));
      fixed &= fixed - 1;
    }
  }
  return found;
}

inline std::vector<std::uint64_t> exhaustive_indices(const ClosedCircuit& closed, std::uint64_t max_found,
                                                     unsigned workers) {
  const std::size_t n = closed.state_width();
  const Evaluator ev(closed.inner());
  const std::uint64_t blocks = ((std::uint64_t{1} << n) + 63) / 64;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(blocks, 64))));
  if (workers == 1) return sweep_blocks(ev, n, 0, blocks, max_found);

  std::vector<std::vector<std::uint64_t>> parts(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = blocks * w / workers, hi = blocks * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi] { parts[w] = sweep_blocks(ev, n, lo, hi, max_found); });
  }
  for (auto& t : pool) t.join();
  std::vector<std::uint64_t> merged;
  for (auto& p : parts) {
    for (auto idx : p) {
      if (merged.size() == max_found) break;
      merged.push_back(idx);
    }
  }
  return merged;
}

inline std::vector<std::uint64_t> functional_graph_indices(const ClosedCircuit& closed) {
  const std::size_t n = closed.state_width();
  const Evaluator ev(closed.inner());
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<std::uint64_t> visited((total + 63) / 64, 0);
  auto seen = [&](std::uint64_t s) { return (visited[s >> 6] >> (s & 63)) & 1u; };
  auto mark = [&](std::uint64_t s) { visited[s >> 6] |= std::uint64_t{1} << (s & 63); };
  std::vector<std::uint8_t> scratch;
  std::vector<std::uint64_t> fixed;
  for (std::uint64_t start = 0; start < total; ++start) {
    std::uint64_t x = start;
    while (!seen(x)) {
      mark(x);
      const std::uint64_t y = ev.eval_index(x, scratch);
      if (y == x) {
        fixed.push_back(x);
        break;
      }
      x = y;
    }
  }
  std::sort(fixed.begin(), fixed.end());
  return fixed;
}

// c(y) = y as a SAT instance over the state variables.
class FixedPointCnf {
 public:
  FixedPointCnf(const ClosedCircuit& closed, const EngineOptions& opts) : width_(closed.state_width()) {
    // semantic gates have no clauses; expand them first
    const Circuit plain = closed.inner().has_semantic_gates() ? lower(closed.inner()) : closed.inner();
    enc_ = encode_circuit(solver_, plain);
    for (std::size_t j = 0; j < width_; ++j) {
      const sat::Lit y = sat::Lit::make(enc_.input_vars[j]);
      const sat::Lit out = enc_.output(plain, j);
      if (out == y) continue;
      solver_.add_clause({~y, out});
      solver_.add_clause({y, ~out});
    }
    // the state determines every wire; branch on it first
    for (sat::Var v : enc_.input_vars) solver_.set_priority(v, 1.0);
    if (opts.timeout) solver_.set_deadline(std::chrono::steady_clock::now() + *opts.timeout);
  }

  sat::Result next(std::span<const sat::Lit> assumptions = {}) { return solver_.solve(assumptions); }

  sat::Solver& mutable_solver() { return solver_; }
  const CircuitEncoding& encoding() const { return enc_; }

  Bits model() const {
    Bits y(width_);
    for (std::size_t j = 0; j < width_; ++j) y[j] = solver_.model_value(enc_.input_vars[j]);
    return y;
  }

  void block(const Bits& y) {
    std::vector<sat::Lit> clause;
    for (std::size_t j = 0; j < width_; ++j) clause.push_back(sat::Lit::make(enc_.input_vars[j], y[j] != 0));
    solver_.add_clause(clause);
  }

  /// Lexicographically smallest remaining model, or nullopt if none. Throws
  /// TimeoutError when the solver gives up.
  std::optional<Bits> lexmin() {
    std::vector<sat::Lit> prefix;
    auto status = next();
    if (status == sat::Result::Unknown) throw TimeoutError("CnfCount engine timed out");
    if (status == sat::Result::Unsat) return std::nullopt;
    Bits best = model();
    for (std::size_t j = 0; j < width_; ++j) {
      const sat::Var v = enc_.input_vars[j];
      if (best[j]) {
        prefix.push_back(sat::Lit::make(v, true));
        status = next(prefix);
        if (status == sat::Result::Unknown) throw TimeoutError("CnfCount engine timed out");
        if (status == sat::Result::Sat) {
          best = model();
          continue;
        }
        prefix.back() = sat::Lit::make(v, false);
      } else {
        prefix.push_back(sat::Lit::make(v, true));
      }
    }
    return best;
  }

  std::size_t width() const { return width_; }
  const sat::Solver& solver() const { return solver_; }

 private:
  std::size_t width_;
  sat::Solver solver_;
  CircuitEncoding enc_;
};

inline std::vector<Bits> orbit_trace(const ClosedCircuit& closed, std::size_t length) {
  std::vector<Bits> trace;
  if (length == 0) return trace;
  const Evaluator ev(closed.inner());
  Bits x(closed.state_width(), 0);
  for (std::size_t step = 0; step < length; ++step) {
    if (std::find(trace.begin(), trace.end(), x) != trace.end()) break;
    trace.push_back(x);
    x = ev.eval(x);
  }
  return trace;
}

}  // namespace detail

/// Fixed points of the closed circuit's induced function in lexicographic
/// order. Stops once limit + 1 have been found (enough to refute uniqueness);
/// pass kNoLimit for all of them.
inline std::vector<Bits> enumerate_fixed_points(const ClosedCircuit& closed, std::uint64_t limit = kNoLimit,
                                                Engine engine = Engine::Exhaustive,
                                                const EngineOptions& opts = {}) {
  const std::uint64_t max_found = limit >= kNoLimit ? std::numeric_limits<std::uint64_t>::max() : limit + 1;
  std::vector<Bits> result;
  if (engine == Engine::CnfCount) {
    detail::FixedPointCnf cnf(closed, opts);
    while (result.size() < max_found) {
      auto y = cnf.lexmin();
      if (!y) break;
      cnf.block(*y);
      result.push_back(std::move(*y));
    }
    return result;
  }
  detail::require_capacity(closed, opts, engine);
  std::vector<std::uint64_t> indices = engine == Engine::Exhaustive
                                           ? detail::exhaustive_indices(closed, max_found, opts.workers)
                                           : detail::functional_graph_indices(closed);
  if (indices.size() > max_found) indices.resize(max_found);
  for (auto idx : indices) result.push_back(bits_from_index(idx, closed.state_width()));
  return result;
}

/// Number of fixed points, saturating at `cap`, via the CNF encoding.
inline FixedPointCount cnf_count_fixed_points(const ClosedCircuit& closed, std::uint64_t cap,
                                              const EngineOptions& opts = {}) {
  detail::FixedPointCnf cnf(closed, opts);
  FixedPointCount result;
  while (result.count < cap) {
    const auto status = cnf.next();
    if (status == sat::Result::Unknown) {
      result.status = FixedPointCount::Status::Timeout;
      return result;
    }
    if (status == sat::Result::Unsat) return result;
    ++result.count;
    cnf.block(cnf.model());
  }
  result.status = FixedPointCount::Status::Saturated;
  return result;
}

inline constexpr std::size_t kAutoExhaustiveBits = 24;

/// Exhaustive sweep up to kAutoExhaustiveBits state bits, CNF above.
inline Engine auto_engine(std::size_t state_width) {
  return state_width <= kAutoExhaustiveBits ? Engine::Exhaustive : Engine::CnfCount;
}

/// Uniqueness check: exactly one y with c(y) = y.
inline ConsistencyReport check_consistency(const ClosedCircuit& closed, Engine engine = Engine::Exhaustive,
                                           const EngineOptions& opts = {}) {
  ConsistencyReport report;
  report.engine = engine;
  std::vector<Bits> fixed;
  if (engine == Engine::CnfCount) {
    detail::FixedPointCnf cnf(closed, opts);
    const auto status = cnf.next();
    if (status == sat::Result::Unknown) throw TimeoutError("CnfCount engine timed out");
    if (status == sat::Result::Sat) {
      Bits first = cnf.model();
      cnf.block(first);
      const auto again = cnf.next();
      if (again == sat::Result::Unknown) throw TimeoutError("CnfCount engine timed out");
      if (again == sat::Result::Unsat) {
        fixed.push_back(std::move(first));
      } else {
        // at least two: report the lexicographically first pair
        detail::FixedPointCnf lex(closed, opts);
        for (int k = 0; k < 2; ++k) {
          auto y = lex.lexmin();
          lex.block(*y);
          fixed.push_back(std::move(*y));
        }
      }
    }
    report.states_examined = fixed.size();
  } else {
    fixed = enumerate_fixed_points(closed, 1, engine, opts);
    const std::uint64_t total = std::uint64_t{1} << closed.state_width();
    report.states_examined =
        (engine == Engine::Exhaustive && fixed.size() == 2) ? index_from_bits(fixed[1]) + 1 : total;
  }
  switch (fixed.size()) {
    case 0:
      report.verdict = Verdict::NoFixedPoint;
      report.trace = detail::orbit_trace(closed, opts.trace_length);
      break;
    case 1:
      report.verdict = Verdict::Consistent;
      report.fixed_point = fixed[0];
      break;
    default:
      report.verdict = Verdict::MultipleFixedPoints;
      report.witnesses = {fixed[0], fixed[1]};
      break;
  }
  return report;
}

/// Accept/reject decoding of a logically consistent closed circuit: accept iff
/// the unique fixed point is 1z; `witness` is z in both cases.
struct Decision {
  bool accept = false;
  Bits witness;
  ConsistencyReport report;
};

inline Decision decide(const ClosedCircuit& closed, Engine engine = Engine::Exhaustive,
                       const EngineOptions& opts = {}) {
  ConsistencyReport report = check_consistency(closed, engine, opts);
  if (!report.consistent()) throw NotNCCircValid(std::move(report));
  const Bits& y = *report.fixed_point;
  Decision d;
  d.accept = !y.empty() && y[0] == 1;
  if (!y.empty()) d.witness.assign(y.begin() + 1, y.end());
  d.report = std::move(report);
  return d;
}

}  // namespace nccirc
