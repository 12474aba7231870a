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

// Classical deterministic CTCs. N parties each read I_j from the past and
// write O_j to the future; the process function w : O -> I closes the loop.
// w is consistent when, for every choice of local operations f_j : I_j -> O_j,
// w o f has exactly one fixed point.
//
// Conventions. Joint states concatenate the parties in order, party 1 first,
// so party 1 holds the most significant bits of a state index. A local
// operation's table is the string f(0) f(1) ... of its outputs; tables are
// ordered by that string (for one bit: const0 < id < not < const1), and joint
// operations by the concatenation of the party tables.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nccirc/circuit.hpp"
#include "nccirc/fixedpoint.hpp"
#include "nccirc/lower.hpp"

namespace nccirc::ctc {

/// Cap on the summed input (and output) widths of a setup.
inline constexpr std::size_t kMaxSetupBits = 16;
inline constexpr std::uint64_t kDefaultLocalBudget = std::uint64_t{1} << 22;
inline constexpr std::uint64_t kDefaultSearchBudget = std::uint64_t{1} << 26;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// w o f is not uniquely fixed; the report says why.
class InvalidAlgorithm : public std::runtime_error {
 public:
  explicit InvalidAlgorithm(ConsistencyReport report, const std::string& what = {})
      : std::runtime_error("invalid algorithm: " + (what.empty() ? std::string(verdict_name(report.verdict)) : what)),
        report_(std::move(report)) {}
  const ConsistencyReport& report() const { return report_; }

 private:
  ConsistencyReport report_;
};

struct PartySpec {
  std::size_t input_bits = 0;   // |I_j| in bits
  std::size_t output_bits = 0;  // |O_j| in bits

  friend bool operator==(const PartySpec&, const PartySpec&) = default;
};

inline std::size_t total_input_bits(const std::vector<PartySpec>& parties) {
  std::size_t n = 0;
  for (const auto& p : parties) n += p.input_bits;
  return n;
}

inline std::size_t total_output_bits(const std::vector<PartySpec>& parties) {
  std::size_t n = 0;
  for (const auto& p : parties) n += p.output_bits;
  return n;
}

inline void check_setup(const std::vector<PartySpec>& parties) {
  if (parties.empty()) throw CircuitError("setup has no parties");
  if (total_input_bits(parties) > kMaxSetupBits || total_output_bits(parties) > kMaxSetupBits) {
    throw BudgetExceeded("setup exceeds " + std::to_string(kMaxSetupBits) + " input or output bits");
  }
}

/// f_j : I_j -> O_j as a circuit.
struct LocalOperation {
  std::size_t party = 0;  // 0-based
  Circuit circuit;
};

/// w : O -> I as a circuit over the concatenated outputs.
struct ProcessFunction {
  std::vector<PartySpec> parties;
  Circuit map;
};

/// A function on small bit strings as a value table: table[x] is the output
/// index for input index x.
using Table = std::vector<std::uint32_t>;

inline Table tabulate(const Circuit& c) {
  if (c.num_inputs() > kMaxSetupBits || c.num_outputs() > 32) {
    throw BudgetExceeded("circuit too wide to tabulate");
  }
  const Evaluator ev(c);
  std::vector<std::uint8_t> scratch;
  Table t(std::size_t{1} << c.num_inputs());
  for (std::uint64_t x = 0; x < t.size(); ++x) {
    const Bits out = ev.eval(bits_from_index(x, c.num_inputs()));
    t[x] = static_cast<std::uint32_t>(index_from_bits(out));
  }
  return t;
}

/// Circuit for a value table, as one semantic gate (or constants when the
/// input is empty).
inline Circuit circuit_from_table(std::size_t in_bits, std::size_t out_bits, const Table& table,
                                  std::string name = {}) {
  if (table.size() != (std::size_t{1} << in_bits)) throw CircuitError("table size does not match input width");
  CircuitBuilder b(in_bits);
  std::vector<WireId> outs;
  if (out_bits > 0) {
    auto tt = TruthTable::from_function(in_bits, out_bits,
                                        [&](std::uint64_t x) { return bits_from_index(table[x], out_bits); });
    outs = b.semantic(std::move(tt), b.inputs());
  }
  return std::move(b).build(std::move(outs), std::move(name));
}

/// Table string f(0) f(1) ... as printed bits.
inline std::string table_string(const Table& t, std::size_t out_bits) {
  std::string s;
  for (auto v : t) s += to_string(bits_from_index(v, out_bits));
  return s;
}

/// Short names for the four one-bit maps, else the table string.
inline std::string describe_local(const Table& t, std::size_t in_bits, std::size_t out_bits) {
  if (in_bits == 1 && out_bits == 1) {
    static const char* names[] = {"const0", "id", "not", "const1"};
    return names[t[0] * 2 + t[1]];
  }
  return table_string(t, out_bits);
}

inline ProcessFunction process_from_table(std::vector<PartySpec> parties, const Table& table) {
  check_setup(parties);
  const std::size_t in = total_input_bits(parties), out = total_output_bits(parties);
  // w maps O to I
  return ProcessFunction{std::move(parties), lower(circuit_from_table(out, in, table, "w"))};
}

inline void check_process(const ProcessFunction& w) {
  check_setup(w.parties);
  require_valid(w.map);
  if (w.map.num_inputs() != total_output_bits(w.parties) || w.map.num_outputs() != total_input_bits(w.parties)) {
    throw CircuitError("process function has " + std::to_string(w.map.num_inputs()) + " inputs and " +
                       std::to_string(w.map.num_outputs()) + " outputs; the setup needs " +
                       std::to_string(total_output_bits(w.parties)) + " and " +
                       std::to_string(total_input_bits(w.parties)));
  }
}

/// Fast evaluator for w o f on value tables.
class Composition {
 public:
  explicit Composition(const std::vector<PartySpec>& parties) : parties_(parties) {
    for (const auto& p : parties_) {
      in_width_ += p.input_bits;
      out_width_ += p.output_bits;
    }
  }

  std::size_t state_count() const { return std::size_t{1} << in_width_; }

  /// Joint output index for joint input `i` under local tables `f`.
  std::uint64_t apply_local(std::uint64_t i, const std::vector<Table>& f) const {
    std::uint64_t o = 0;
    std::size_t in_shift = in_width_;
    for (std::size_t j = 0; j < parties_.size(); ++j) {
      in_shift -= parties_[j].input_bits;
      const std::uint64_t ij = (i >> in_shift) & ((std::uint64_t{1} << parties_[j].input_bits) - 1);
      o = (o << parties_[j].output_bits) | f[j][ij];
    }
    return o;
  }

  /// Fixed points of w o f, stopping after `limit`.
  std::vector<std::uint64_t> fixed_points(const Table& w, const std::vector<Table>& f, std::size_t limit = 2) const {
    std::vector<std::uint64_t> found;
    for (std::uint64_t i = 0; i < state_count() && found.size() < limit; ++i) {
      if (w[apply_local(i, f)] == i) found.push_back(i);
    }
    return found;
  }

 private:
  std::vector<PartySpec> parties_;
  std::size_t in_width_ = 0;
  std::size_t out_width_ = 0;
};

/// Every joint local operation in lexicographic order, as per-party tables.
class LocalOperationSpace {
 public:
  explicit LocalOperationSpace(const std::vector<PartySpec>& parties) : parties_(parties) {
    for (const auto& p : parties_) log2_size_ += p.output_bits << p.input_bits;
  }

  /// log2 |D|.
  std::size_t log2_size() const { return log2_size_; }

  std::uint64_t size() const {
    if (log2_size_ >= 64) throw BudgetExceeded("|D| = 2^" + std::to_string(log2_size_) + " joint local operations");
    return std::uint64_t{1} << log2_size_;
  }

  void require_budget(std::uint64_t budget) const {
    if (log2_size_ >= 64 || size() > budget) {
      throw BudgetExceeded("checking every local operation needs a budget of 2^" + std::to_string(log2_size_) +
                           " = " + (log2_size_ < 64 ? std::to_string(std::uint64_t{1} << log2_size_) : "overflow") +
                           ", configured " + std::to_string(budget));
    }
  }

  /// Tables for joint operation number `k`; the concatenated table strings
  /// read as k.
  std::vector<Table> decode(std::uint64_t k) const {
    std::vector<Table> f(parties_.size());
    for (std::size_t j = parties_.size(); j-- > 0;) {
      const auto& p = parties_[j];
      f[j].resize(std::size_t{1} << p.input_bits);
      for (std::size_t x = f[j].size(); x-- > 0;) {
        f[j][x] = static_cast<std::uint32_t>(k & ((std::uint64_t{1} << p.output_bits) - 1));
        k = p.output_bits >= 64 ? 0 : k >> p.output_bits;
      }
    }
    return f;
  }

  /// The identity operation where I_j and O_j have equal width.
  std::optional<std::vector<Table>> identity() const {
    std::vector<Table> f;
    for (const auto& p : parties_) {
      if (p.input_bits != p.output_bits) return std::nullopt;
      Table t(std::size_t{1} << p.input_bits);
      std::iota(t.begin(), t.end(), 0u);
      f.push_back(std::move(t));
    }
    return f;
  }

 private:
  std::vector<PartySpec> parties_;
  std::size_t log2_size_ = 0;
};

inline std::vector<LocalOperation> local_operations(const std::vector<PartySpec>& parties,
                                                    const std::vector<Table>& f) {
  std::vector<LocalOperation> ops;
  for (std::size_t j = 0; j < parties.size(); ++j) {
    ops.push_back({j, circuit_from_table(parties[j].input_bits, parties[j].output_bits, f[j],
                                         "f" + std::to_string(j + 1))});
  }
  return ops;
}

struct Violation {
  std::vector<Table> tables;         // per party
  std::vector<LocalOperation> f;     // the same, as circuits
  Verdict kind = Verdict::NoFixedPoint;
  std::uint64_t index = 0;           // position in the lexicographic enumeration
};

struct ProcessCheck {
  std::optional<Violation> violation;  // nullopt: consistent
  std::uint64_t operations_checked = 0;

  bool consistent() const { return !violation.has_value(); }
};

/// Consistency on value tables: first f (lexicographically) for which w o f does
/// not have exactly one fixed point.
inline ProcessCheck check_process_table(const std::vector<PartySpec>& parties, const Table& w,
                                        std::uint64_t budget = kDefaultLocalBudget) {
  check_setup(parties);
  const LocalOperationSpace space(parties);
  space.require_budget(budget);
  const Composition comp(parties);
  ProcessCheck result;
  for (std::uint64_t k = 0; k < space.size(); ++k) {
    const auto f = space.decode(k);
    const auto fixed = comp.fixed_points(w, f);
    ++result.operations_checked;
    if (fixed.size() != 1) {
      result.violation = Violation{f, local_operations(parties, f),
                                   fixed.empty() ? Verdict::NoFixedPoint : Verdict::MultipleFixedPoints, k};
      return result;
    }
  }
  return result;
}

inline ProcessCheck check_process_function(const ProcessFunction& w, std::uint64_t budget = kDefaultLocalBudget) {
  check_process(w);
  return check_process_table(w.parties, tabulate(w.map), budget);
}

/// The closed circuit on I computing w o f: each party's operation on its own
/// slice, then w on the concatenated outputs.
inline ClosedCircuit to_closed_circuit(const ProcessFunction& w, const std::vector<LocalOperation>& f) {
  check_process(w);
  if (f.size() != w.parties.size()) {
    throw CircuitError("expected " + std::to_string(w.parties.size()) + " local operations, got " +
                       std::to_string(f.size()));
  }
  CircuitBuilder b(total_input_bits(w.parties));
  std::vector<WireId> outs;
  std::size_t offset = 0;
  for (std::size_t j = 0; j < w.parties.size(); ++j) {
    const auto& p = w.parties[j];
    const Circuit& fj = f[j].circuit;
    if (f[j].party != j) throw CircuitError("local operation " + std::to_string(j + 1) + " is for another party");
    if (fj.num_inputs() != p.input_bits || fj.num_outputs() != p.output_bits) {
      throw CircuitError("local operation for party " + std::to_string(j + 1) + " maps " +
                         std::to_string(fj.num_inputs()) + " -> " + std::to_string(fj.num_outputs()) +
                         " bits; party has " + std::to_string(p.input_bits) + " -> " +
                         std::to_string(p.output_bits));
    }
    std::vector<WireId> slice;
    for (std::size_t k = 0; k < p.input_bits; ++k) slice.push_back(b.input(offset + k));
    offset += p.input_bits;
    auto o = b.inline_circuit(fj, slice);
    outs.insert(outs.end(), o.begin(), o.end());
  }
  auto next = b.inline_circuit(w.map, outs);
  return ClosedCircuit(std::move(b).build(std::move(next), "w_of_f"));
}

struct CtcDecision {
  bool accept = false;
  Bits z;  // party 1's state after its leading bit
  Bits fixed_point;
  ConsistencyReport report;
};

/// Runs the CTC algorithm: the unique fixed point of w o f, read off at party
/// 1 (accept iff its first input bit is 1). Unless `waive_full_check`, w must
/// also pass check_process_function.
inline CtcDecision decide_ctc(const ProcessFunction& w, const std::vector<LocalOperation>& f,
                              bool waive_full_check = false, std::uint64_t budget = kDefaultLocalBudget) {
  const ClosedCircuit closed = to_closed_circuit(w, f);
  if (w.parties[0].input_bits == 0) throw CircuitError("party 1 has no input bits to decide on");
  ConsistencyReport report = check_consistency(closed, auto_engine(closed.state_width()));
  if (!report.consistent()) throw InvalidAlgorithm(std::move(report));
  if (!waive_full_check) {
    const ProcessCheck full = check_process_function(w, budget);
    if (!full.consistent()) {
      ConsistencyReport bad = check_consistency(to_closed_circuit(w, full.violation->f));
      throw InvalidAlgorithm(std::move(bad), std::string("process function is not consistent for every local operation: ") +
                                                 verdict_name(full.violation->kind));
    }
  }
  CtcDecision d;
  d.fixed_point = *report.fixed_point;
  d.accept = d.fixed_point[0] != 0;
  d.z.assign(d.fixed_point.begin() + 1, d.fixed_point.begin() + static_cast<std::ptrdiff_t>(w.parties[0].input_bits));
  d.report = std::move(report);
  return d;
}

struct CausalOrder {
  std::optional<std::vector<std::size_t>> order;  // 0-based parties, earliest first; nullopt: NotFixedOrder
  std::vector<std::vector<bool>> depends;         // depends[k][m]: I_k varies with O_m

  bool ordered() const { return order.has_value(); }
};

/// Extensional dependence of each input slice on each output slice, then
/// the lexicographically smallest order in which every party's input depends
/// only on strictly earlier parties' outputs.
inline CausalOrder check_causal_order_table(const std::vector<PartySpec>& parties, const Table& w) {
  check_setup(parties);
  const std::size_t n = parties.size();
  const std::size_t in_width = total_input_bits(parties), out_width = total_output_bits(parties);
  std::vector<std::uint64_t> in_mask(n), out_mask(n);
  for (std::size_t j = 0, in_shift = in_width, out_shift = out_width; j < n; ++j) {
    in_shift -= parties[j].input_bits;
    out_shift -= parties[j].output_bits;
    in_mask[j] = ((std::uint64_t{1} << parties[j].input_bits) - 1) << in_shift;
    out_mask[j] = ((std::uint64_t{1} << parties[j].output_bits) - 1) << out_shift;
  }
  CausalOrder result;
  result.depends.assign(n, std::vector<bool>(n, false));
  for (std::uint64_t o = 0; o < w.size(); ++o) {
    for (std::size_t bit = 0; bit < out_width; ++bit) {
      const std::uint64_t diff = w[o] ^ w[o ^ (std::uint64_t{1} << bit)];
      if (!diff) continue;
      std::size_t m = 0;
      while (!(out_mask[m] >> bit & 1u)) ++m;
      for (std::size_t k = 0; k < n; ++k) {
        if (diff & in_mask[k]) result.depends[k][m] = true;
      }
    }
  }
  std::vector<bool> placed(n, false);
  std::vector<std::size_t> order;
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<std::size_t> pick;
    for (std::size_t k = 0; k < n && !pick; ++k) {
      if (placed[k]) continue;
      bool ready = true;
      for (std::size_t m = 0; m < n; ++m) {
        if (result.depends[k][m] && (m == k || !placed[m])) ready = false;
      }
      if (ready) pick = k;
    }
    if (!pick) return result;
    placed[*pick] = true;
    order.push_back(*pick);
  }
  result.order = std::move(order);
  return result;
}

inline CausalOrder check_causal_order(const ProcessFunction& w) {
  check_process(w);
  return check_causal_order_table(w.parties, tabulate(w.map));
}

struct SearchResult {
  std::optional<ProcessFunction> process;  // nullopt: none found
  std::optional<Table> table;
  std::uint64_t candidates_examined = 0;
};

/// Lexicographically first w : O -> I (w(0) most significant) that is
/// consistent for every local operation and has no fixed causal order.
inline SearchResult search_noncausal_process(std::size_t parties_count, std::size_t bits_per_party,
                                             std::uint64_t budget = kDefaultSearchBudget) {
  if (parties_count == 0) throw CircuitError("search needs at least one party");
  const std::vector<PartySpec> parties(parties_count, PartySpec{bits_per_party, bits_per_party});
  check_setup(parties);
  const std::size_t width = parties_count * bits_per_party;
  const std::size_t entries = std::size_t{1} << width;
  const std::size_t log2_candidates = width * entries;
  if (log2_candidates >= 63 || (std::uint64_t{1} << log2_candidates) > budget) {
    throw BudgetExceeded("search space has 2^" + std::to_string(log2_candidates) + " candidates, budget " +
                         std::to_string(budget));
  }
  const LocalOperationSpace space(parties);
  space.require_budget(kDefaultLocalBudget);
  const Composition comp(parties);
  // identity first, then every operation in order
  std::vector<std::vector<std::uint64_t>> local_maps;  // joint I index -> joint O index
  auto add_map = [&](const std::vector<Table>& f) {
    std::vector<std::uint64_t> m(comp.state_count());
    for (std::uint64_t i = 0; i < m.size(); ++i) m[i] = comp.apply_local(i, f);
    local_maps.push_back(std::move(m));
  };
  add_map(*space.identity());
  for (std::uint64_t k = 0; k < space.size(); ++k) add_map(space.decode(k));

  SearchResult result;
  Table w(entries, 0);
  const std::uint64_t total = std::uint64_t{1} << log2_candidates;
  for (std::uint64_t c = 0; c < total; ++c) {
    if (c > 0) {  // next table, last entry fastest
      for (std::size_t e = entries; e-- > 0;) {
        if (++w[e] < entries) break;
        w[e] = 0;
      }
    }
    ++result.candidates_examined;
    bool ok = true;
    for (const auto& m : local_maps) {
      int fixed = 0;
      for (std::uint64_t i = 0; i < m.size() && fixed < 2; ++i) fixed += w[m[i]] == i;
      if (fixed != 1) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (check_causal_order_table(parties, w).ordered()) continue;
    result.table = w;
    result.process = process_from_table(parties, w);
    return result;
  }
  return result;
}

}  // namespace nccirc::ctc
