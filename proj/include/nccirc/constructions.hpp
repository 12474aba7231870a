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

// Instance-to-circuit constructions. A decision problem given by a verifier
// pair becomes the closed circuit on (b, w)
//
//   c_x(b, w) = (0, w)      if V_no(x, w)
//               (1, w)      if V_yes(x, w)
//               (!b, w)     otherwise,
//
// and a search relation R becomes c_x(y) = y if (x, y) in R, else y with its
// first bit flipped. Verifiers and relations are circuit builders: instance
// in, predicate circuit over the witness out.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nccirc/circuit.hpp"
#include "nccirc/fixedpoint.hpp"

namespace nccirc {

/// Builds the predicate circuit for one instance: q(|x|) inputs, 1 output.
using InstanceBuilder = std::function<Circuit(const Bits& x)>;
/// Witness width q as a function of the instance length.
using WidthFn = std::function<std::size_t(std::size_t)>;

struct VerifierPair {
  InstanceBuilder builder_yes;
  InstanceBuilder builder_no;
  WidthFn witness_width;
  std::string name;
};

enum class PromiseKind { TotalUnique, UniqueOrEmpty };

struct RelationSpec {
  InstanceBuilder builder;
  WidthFn width;
  PromiseKind promise_kind = PromiseKind::TotalUnique;
  std::string name;
};

/// The instance sits outside the promise; the report says which way.
class PromiseViolation : public std::runtime_error {
 public:
  explicit PromiseViolation(ConsistencyReport report)
      : std::runtime_error(std::string("promise violation: ") + verdict_name(report.verdict)),
        report_(std::move(report)) {}
  const ConsistencyReport& report() const { return report_; }

 private:
  ConsistencyReport report_;
};

namespace detail {

inline Circuit build_predicate(const InstanceBuilder& builder, const Bits& x, std::size_t q, const char* role) {
  if (!builder) throw CircuitError(std::string(role) + " builder is empty");
  Circuit c = builder(x);
  const Validation v = validate(c);
  if (!v.ok) throw CircuitError(std::string(role) + " builder produced an invalid circuit: " + v.message);
  if (c.num_inputs() != q || c.num_outputs() != 1) {
    throw CircuitError(std::string(role) + " builder produced " + std::to_string(c.num_inputs()) + " inputs and " +
                       std::to_string(c.num_outputs()) + " outputs; expected " + std::to_string(q) + " and 1");
  }
  return c;
}

inline std::string instance_name(const std::string& base, const Bits& x) {
  return (base.empty() ? std::string("instance") : base) + "_x" + (x.empty() ? std::string("e") : to_string(x));
}

}  // namespace detail

/// Predicate circuit holding `fn` as one semantic gate over q inputs. `fn`
/// receives the witness as an integer (input 0 most significant).
template <typename Fn>
Circuit predicate_from_function(std::size_t q, Fn&& fn, std::string name = {}) {
  CircuitBuilder b(q);
  auto table = TruthTable::from_function(q, 1, [&](std::uint64_t w) { return Bits{fn(w) ? std::uint8_t{1} : std::uint8_t{0}}; });
  auto out = b.semantic(std::move(table), b.inputs());
  return std::move(b).build(std::move(out), std::move(name));
}

/// Adapts a template netlist over (x, w) into a builder by fixing x.
inline InstanceBuilder template_builder(Circuit tmpl) {
  require_valid(tmpl);
  return [tmpl = std::move(tmpl)](const Bits& x) { return bind_prefix(tmpl, x); };
}

inline ClosedCircuit build_decision_circuit(const Bits& x, const VerifierPair& pair) {
  if (!pair.witness_width) throw CircuitError("verifier pair has no witness width");
  const std::size_t q = pair.witness_width(x.size());
  const Circuit yes = detail::build_predicate(pair.builder_yes, x, q, "V_yes");
  const Circuit no = detail::build_predicate(pair.builder_no, x, q, "V_no");

  CircuitBuilder b(1 + q);
  std::vector<WireId> w;
  for (std::size_t i = 0; i < q; ++i) w.push_back(b.input(1 + i));
  const WireId v_yes = b.inline_circuit(yes, w)[0];
  const WireId v_no = b.inline_circuit(no, w)[0];
  const WireId flag = b.input(0);
  std::vector<WireId> outputs;
  // V_no wins over V_yes; neither -> flip
  outputs.push_back(b.and_(b.not_(v_no), b.or_(v_yes, b.not_(flag))));
  outputs.insert(outputs.end(), w.begin(), w.end());
  return ClosedCircuit(std::move(b).build(std::move(outputs), detail::instance_name(pair.name, x)));
}

inline ClosedCircuit build_search_circuit(const Bits& x, const RelationSpec& rel) {
  if (!rel.width) throw CircuitError("relation has no width function");
  const std::size_t q = rel.width(x.size());
  if (q == 0) throw CircuitError("search circuit needs a witness width of at least 1");
  const Circuit pred = detail::build_predicate(rel.builder, x, q, "relation");

  CircuitBuilder b(q);
  const WireId accept = b.inline_circuit(pred, b.inputs())[0];
  std::vector<WireId> outputs = b.inputs();
  outputs[0] = b.xor_(outputs[0], b.not_(accept));
  return ClosedCircuit(std::move(b).build(std::move(outputs), detail::instance_name(rel.name, x)));
}

struct DecisionResult {
  bool member = false;
  Bits witness;
  ConsistencyReport report;
};

inline ConsistencyReport check_with(const ClosedCircuit& closed, std::optional<Engine> engine,
                                    const EngineOptions& opts) {
  return check_consistency(closed, engine.value_or(auto_engine(closed.state_width())), opts);
}

/// Member bit and witness from the unique fixed point. Throws
/// PromiseViolation with the full report otherwise.
inline DecisionResult run_decision(const Bits& x, const VerifierPair& pair, std::optional<Engine> engine = {},
                                   const EngineOptions& opts = {}) {
  ConsistencyReport report = check_with(build_decision_circuit(x, pair), engine, opts);
  if (!report.consistent()) throw PromiseViolation(std::move(report));
  DecisionResult r;
  const Bits& y = *report.fixed_point;
  r.member = y[0] != 0;
  r.witness.assign(y.begin() + 1, y.end());
  r.report = std::move(report);
  return r;
}

inline Bits run_search(const Bits& x, const RelationSpec& rel, std::optional<Engine> engine = {},
                       const EngineOptions& opts = {}) {
  ConsistencyReport report = check_with(build_search_circuit(x, rel), engine, opts);
  if (!report.consistent()) throw PromiseViolation(std::move(report));
  return *report.fixed_point;
}

/// R1 ∪ R2: the OR of the two predicates. Only the caller knows whether the
/// two form an F(UP ∩ coUP) pair (total and unique union); without that the
/// merged promise is UniqueOrEmpty.
inline RelationSpec merge_relations(const RelationSpec& r1, const RelationSpec& r2, bool complementary_pair = false) {
  if (!r1.width || !r2.width) throw CircuitError("merge_relations: missing width function");
  RelationSpec merged;
  merged.width = r1.width;
  merged.name = (r1.name.empty() ? "r1" : r1.name) + "_or_" + (r2.name.empty() ? "r2" : r2.name);
  merged.promise_kind = complementary_pair ? PromiseKind::TotalUnique : PromiseKind::UniqueOrEmpty;
  merged.builder = [r1, r2](const Bits& x) {
    const std::size_t q = r1.width(x.size());
    if (r2.width(x.size()) != q) {
      throw CircuitError("merge_relations: width mismatch at |x| = " + std::to_string(x.size()) + " (" +
                         std::to_string(q) + " vs " + std::to_string(r2.width(x.size())) + ")");
    }
    const Circuit p1 = detail::build_predicate(r1.builder, x, q, "r1");
    const Circuit p2 = detail::build_predicate(r2.builder, x, q, "r2");
    CircuitBuilder b(q);
    const WireId a = b.inline_circuit(p1, b.inputs())[0];
    const WireId c = b.inline_circuit(p2, b.inputs())[0];
    const WireId either = b.or_(a, c);
    return std::move(b).build({either});
  };
  return merged;
}

}  // namespace nccirc
