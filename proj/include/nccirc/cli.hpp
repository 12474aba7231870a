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

// The nccirc command line. Exit codes:
//   0  success / consistent / accept
//   1  reject (or no search result)
//   2  inconsistency or promise violation
//   3  usage, parse or manifest error
//   4  resource limit (capacity, budget, timeout)
// Errors print one line to stderr: "nccirc: error[<code>] <kind>: <message>".

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nccirc/constructions.hpp"
#include "nccirc/ctc.hpp"
#include "nccirc/factoring.hpp"
#include "nccirc/fixedpoint.hpp"
#include "nccirc/manifest.hpp"
#include "nccirc/netlist.hpp"
#include "nccirc/report.hpp"

namespace nccirc::cli {

enum ExitCode : int { kOk = 0, kReject = 1, kInconsistent = 2, kUsage = 3, kResource = 4 };

struct Settings {
  std::string output = "text";
  std::uint64_t seed = 0;
  bool timing = false;
  std::optional<std::string> engine;
  double timeout_s = 0;
};

namespace detail {

/// Thrown to leave a command with a verdict-driven exit code and an error
/// line; the payload (if any) has already been printed.
struct Exit {
  int code;
  std::string kind;
  std::string message;
};

inline EngineOptions engine_options(const Settings& s) {
  EngineOptions o;
  if (s.timeout_s > 0) {
    o.timeout = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::duration<double>(s.timeout_s));
  }
  return o;
}

inline Engine pick_engine(const Settings& s, std::size_t width) {
  return s.engine ? parse_engine(*s.engine) : auto_engine(width);
}

class Runner {
 public:
  Runner(const Settings& s, std::ostream& out) : s_(s), out_(out), start_(std::chrono::steady_clock::now()) {}

  bool report_mode() const { return s_.output == "report"; }

  /// Prints a report (report mode) and returns `code`.
  int emit(nlohmann::json j, int code) {
    if (s_.timing) {
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
      j["timing"]["wall_ms"] = ms;
    }
    out_ << emit_report(j);
    return code;
  }

  int emit(const ConsistencyReport& r, const nlohmann::json& payload, int code) {
    nlohmann::json j = report_json(r);
    for (auto it = payload.begin(); it != payload.end(); ++it) j[it.key()] = it.value();
    return emit(std::move(j), code);
  }

  std::ostream& out() { return out_; }

 private:
  const Settings& s_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
};

inline int verdict_code(const ConsistencyReport& r) { return r.consistent() ? kOk : kInconsistent; }

inline void print_verdict_text(std::ostream& out, const ConsistencyReport& r) {
  out << "verdict: " << verdict_name(r.verdict) << "\n";
  if (r.fixed_point) out << "fixed point: " << to_string(*r.fixed_point) << "\n";
  if (r.verdict == Verdict::MultipleFixedPoints) {
    out << "fixed points: " << to_string(r.witnesses[0]) << " " << to_string(r.witnesses[1]) << "\n";
  }
  if (r.verdict == Verdict::NoFixedPoint && !r.trace.empty()) {
    out << "orbit of 0:";
    for (const auto& t : r.trace) out << " " << to_string(t);
    out << "\n";
  }
}

inline ClosedCircuit require_closed(const Circuit& c) {
  if (c.num_inputs() != c.num_outputs()) {
    throw Exit{kUsage, "usage", "not closable: " + std::to_string(c.num_inputs()) + " inputs, " +
                                    std::to_string(c.num_outputs()) + " outputs"};
  }
  return ClosedCircuit(c);
}

inline int cmd_validate(Runner& r, const std::string& path) {
  const NetlistDocument doc = parse_document(read_text_file(path));
  const Circuit& c = doc.circuit;
  if (r.report_mode()) {
    return r.emit({{"command", "validate"},
                   {"valid", true},
                   {"inputs", c.num_inputs()},
                   {"outputs", c.num_outputs()},
                   {"gates", c.gates().size()},
                   {"closed", doc.closed}},
                  kOk);
  }
  r.out() << "valid: " << c.num_inputs() << " inputs, " << c.num_outputs() << " outputs, " << c.gates().size()
          << " gates" << (doc.closed ? ", closed" : "") << "\n";
  return kOk;
}

inline int cmd_close(Runner& r, const std::string& path) {
  const ClosedCircuit closed = require_closed(load_netlist(path));
  const std::string text = serialize(closed);
  if (r.report_mode()) return r.emit({{"command", "close"}, {"netlist", text}}, kOk);
  r.out() << text;
  return kOk;
}

inline int cmd_fixpoints(Runner& r, const Settings& s, const std::string& path, std::uint64_t limit) {
  const ClosedCircuit closed = require_closed(load_netlist(path));
  const Engine engine = pick_engine(s, closed.state_width());
  const auto opts = engine_options(s);
  const ConsistencyReport report = check_consistency(closed, engine, opts);
  std::vector<Bits> all = enumerate_fixed_points(closed, limit, engine, opts);
  const bool truncated = limit < kNoLimit && all.size() > limit;
  if (truncated) all.resize(limit);
  std::vector<std::string> listed;
  for (const auto& y : all) listed.push_back(to_string(y));
  const int code = verdict_code(report);
  if (r.report_mode()) {
    return r.emit(report, {{"command", "fixpoints"}, {"fixed_points", listed}, {"truncated", truncated}}, code);
  }
  print_verdict_text(r.out(), report);
  r.out() << "fixed points (" << listed.size() << (truncated ? ", truncated" : "") << "):";
  for (const auto& y : listed) r.out() << " " << y;
  r.out() << "\n";
  return code;
}

inline int cmd_decide(Runner& r, const Settings& s, const std::string& path) {
  const ClosedCircuit closed = require_closed(load_netlist(path));
  const ConsistencyReport report =
      check_consistency(closed, pick_engine(s, closed.state_width()), engine_options(s));
  if (!report.consistent()) {
    if (r.report_mode()) r.emit(report, {{"command", "decide"}}, kInconsistent);
    else print_verdict_text(r.out(), report);
    throw Exit{kInconsistent, "inconsistent", std::string("not an NCCirc-valid circuit: ") + verdict_name(report.verdict)};
  }
  const Bits& y = *report.fixed_point;
  const bool accept = !y.empty() && y[0];
  const std::string witness = y.empty() ? "" : to_string(Bits(y.begin() + 1, y.end()));
  const int code = accept ? kOk : kReject;
  if (r.report_mode()) {
    return r.emit(report, {{"command", "decide"}, {"decision", accept ? "accept" : "reject"}, {"witness", witness}},
                  code);
  }
  r.out() << (accept ? "accept" : "reject") << " " << witness << "\n";
  return code;
}

inline int cmd_factor(Runner& r, const Settings& s, std::uint64_t n, const std::string& mode, const std::string& layout) {
  factoring::FactorizeOptions o;
  try {
    o.mode = factoring::parse_domain_mode(mode);
  } catch (const std::invalid_argument& e) {
    throw Exit{kUsage, "usage", e.what()};
  }
  if (layout != "paper" && layout != "compact") throw Exit{kUsage, "usage", "unknown layout '" + layout + "'"};
  o.layout = layout == "paper" ? factoring::LayoutKind::Paper : factoring::LayoutKind::Compact;
  if (s.engine) o.engine = parse_engine(*s.engine);
  o.engine_options = engine_options(s);
  nlohmann::json payload = {{"command", "factor"}, {"n", n}, {"mode", mode}, {"layout", layout}};
  try {
    const auto res = factoring::factorize(n, o);
    nlohmann::json factors = nlohmann::json::array();
    for (auto [p, e] : res.factorization.factors) factors.push_back({p, e});
    payload["factors"] = factors;
    payload["state_bits"] = res.layout.state_width();
    if (r.report_mode()) return r.emit(res.report, payload, kOk);
    r.out() << n << " =";
    for (std::size_t k = 0; k < res.factorization.factors.size(); ++k) {
      const auto [p, e] = res.factorization.factors[k];
      r.out() << (k ? " *" : "") << " " << p << "^" << e;
    }
    r.out() << "\n";
    return kOk;
  } catch (const NotNCCircValid& e) {
    if (r.report_mode()) r.emit(e.report(), payload, kInconsistent);
    else print_verdict_text(r.out(), e.report());
    throw Exit{kInconsistent, "inconsistent", e.what()};
  }
}

inline nlohmann::json order_json(const ctc::CausalOrder& co) {
  if (!co.ordered()) return "not_fixed_order";
  nlohmann::json order = nlohmann::json::array();
  for (auto k : *co.order) order.push_back(k + 1);
  return order;
}

inline int cmd_ctc_check(Runner& r, const std::string& path) {
  const CtcSetup setup = load_ctc_setup(path);
  const auto check = ctc::check_process_function(setup.process);
  const auto order = ctc::check_causal_order(setup.process);
  nlohmann::json payload = {{"command", "ctc check"},
                            {"verdict", check.consistent() ? "consistent" : verdict_name(check.violation->kind)},
                            {"local_operations_checked", check.operations_checked},
                            {"causal_order", order_json(order)}};
  if (!check.consistent()) {
    nlohmann::json f = nlohmann::json::array();
    for (std::size_t j = 0; j < setup.process.parties.size(); ++j) {
      const auto& p = setup.process.parties[j];
      f.push_back(ctc::describe_local(check.violation->tables[j], p.input_bits, p.output_bits));
    }
    payload["violation"] = {{"f", f}, {"kind", verdict_name(check.violation->kind)}};
  }
  const int code = check.consistent() ? kOk : kInconsistent;
  if (r.report_mode()) return r.emit(payload, code);
  r.out() << "process function: " << payload["verdict"].get<std::string>() << "\n";
  if (!check.consistent()) r.out() << "first violation: f = " << payload["violation"]["f"].dump() << "\n";
  r.out() << "causal order: " << payload["causal_order"].dump() << "\n";
  return code;
}

inline int cmd_ctc_decide(Runner& r, const std::string& path, bool waive) {
  const CtcSetup setup = load_ctc_setup(path);
  if (!setup.local_operations) throw Exit{kUsage, "manifest", path + ": setup lists no local operations"};
  try {
    const auto d = ctc::decide_ctc(setup.process, *setup.local_operations, waive);
    const int code = d.accept ? kOk : kReject;
    if (r.report_mode()) {
      return r.emit(d.report, {{"command", "ctc decide"}, {"decision", d.accept ? "accept" : "reject"}, {"z", to_string(d.z)}},
                    code);
    }
    r.out() << (d.accept ? "accept" : "reject") << " " << to_string(d.z) << "\n";
    return code;
  } catch (const ctc::InvalidAlgorithm& e) {
    if (r.report_mode()) r.emit(e.report(), {{"command", "ctc decide"}}, kInconsistent);
    else print_verdict_text(r.out(), e.report());
    throw Exit{kInconsistent, "inconsistent", e.what()};
  }
}

inline int cmd_ctc_search(Runner& r, std::size_t parties, std::size_t bits) {
  const auto res = ctc::search_noncausal_process(parties, bits);
  nlohmann::json payload = {{"command", "ctc search-noncausal"},
                            {"parties", parties},
                            {"bits", bits},
                            {"candidates_examined", res.candidates_examined},
                            {"found", res.process.has_value()}};
  if (res.process) {
    payload["table"] = *res.table;
    payload["netlist"] = serialize(res.process->map);
  }
  const int code = res.process ? kOk : kReject;
  if (r.report_mode()) return r.emit(payload, code);
  if (!res.process) {
    r.out() << "none found (" << res.candidates_examined << " candidates)\n";
    return code;
  }
  r.out() << "found after " << res.candidates_examined << " candidates; w table:";
  for (auto v : *res.table) r.out() << " " << to_string(bits_from_index(v, parties * bits));
  r.out() << "\n" << serialize(res.process->map);
  return code;
}

inline int cmd_construct(Runner& r, const Settings& s, const std::string& kind, const std::string& path,
                         const std::string& instance) {
  Bits x;
  try {
    x = bits_from_string(instance);
  } catch (const std::invalid_argument& e) {
    throw Exit{kUsage, "usage", std::string("--instance: ") + e.what()};
  }
  const Construction c = load_construction(path);
  const bool want_decision = kind == "decision";
  if (want_decision != (c.kind == ConstructionKind::Decision)) {
    throw Exit{kUsage, "manifest", path + " is not a " + kind + " construction"};
  }
  if (x.size() != c.instance_bits) {
    throw Exit{kUsage, "usage", "instance has " + std::to_string(x.size()) + " bits, construction expects " +
                                    std::to_string(c.instance_bits)};
  }
  const std::optional<Engine> engine = s.engine ? std::optional(parse_engine(*s.engine)) : std::nullopt;
  nlohmann::json payload = {{"command", "construct " + kind}, {"name", c.name}, {"instance", instance}};
  try {
    if (want_decision) {
      const auto d = run_decision(x, c.pair, engine, engine_options(s));
      payload["member"] = d.member;
      payload["witness"] = to_string(d.witness);
      const int code = d.member ? kOk : kReject;
      if (r.report_mode()) return r.emit(d.report, payload, code);
      r.out() << (d.member ? "member" : "non-member") << " witness " << to_string(d.witness) << "\n";
      return code;
    }
    const ClosedCircuit closed = build_search_circuit(x, c.relation);
    const ConsistencyReport report =
        check_consistency(closed, engine.value_or(auto_engine(closed.state_width())), engine_options(s));
    if (!report.consistent()) throw PromiseViolation(report);
    payload["solution"] = to_string(*report.fixed_point);
    if (r.report_mode()) return r.emit(report, payload, kOk);
    r.out() << "solution " << to_string(*report.fixed_point) << "\n";
    return kOk;
  } catch (const PromiseViolation& e) {
    if (r.report_mode()) r.emit(e.report(), payload, kInconsistent);
    else print_verdict_text(r.out(), e.report());
    throw Exit{kInconsistent, "promise", e.what()};
  }
}

inline std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace detail

/// Runs the command line; returns the exit code. `args` excludes argv[0].
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"nccirc: closed Boolean circuits, unique fixed points, and their constructions"};
  app.name("nccirc");
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_option("--output", s.output, "text or report (JSON)")->check(CLI::IsMember({"text", "report"}));
  app.add_option("--seed", s.seed, "seed for sampling helpers; never changes a verdict");
  app.add_flag("--timing", s.timing, "add wall-clock time to reports (breaks byte-identical output)");

  std::string path, mode = "extended", layout = "paper", kind, instance, engine;
  std::uint64_t limit = kNoLimit, n = 0;
  std::size_t parties = 3, bits = 1;
  bool waive = false;
  auto engine_opts = [&](CLI::App* c) {
    c->add_option("--engine", engine, "exhaustive | functional-graph | cnf-count (default: auto)");
    c->add_option("--timeout", s.timeout_s, "engine time limit in seconds");
  };

  auto* validate = app.add_subcommand("validate", "parse and validate a netlist");
  validate->add_option("netlist", path)->required();
  auto* close_cmd = app.add_subcommand("close", "print a netlist as a closed circuit");
  close_cmd->add_option("netlist", path)->required();
  auto* fixpoints = app.add_subcommand("fixpoints", "fixed points of a closed circuit");
  fixpoints->add_option("netlist", path)->required();
  fixpoints->add_option("--limit", limit, "list at most this many");
  engine_opts(fixpoints);
  auto* decide_cmd = app.add_subcommand("decide", "accept/reject by the unique fixed point");
  decide_cmd->add_option("netlist", path)->required();
  engine_opts(decide_cmd);
  auto* factor = app.add_subcommand("factor", "factor N through its closed circuit");
  factor->add_option("N", n)->required();
  factor->add_option("--mode", mode, "extended | paper-strict");
  factor->add_option("--layout", layout, "paper | compact");
  engine_opts(factor);
  auto* ctc_cmd = app.add_subcommand("ctc", "classical deterministic CTCs");
  ctc_cmd->require_subcommand(1);
  auto* ctc_check = ctc_cmd->add_subcommand("check", "check a process function against every local operation");
  ctc_check->add_option("setup", path)->required();
  auto* ctc_decide = ctc_cmd->add_subcommand("decide", "run a setup's local operations through w");
  ctc_decide->add_option("setup", path)->required();
  ctc_decide->add_flag("--waive-full-check", waive, "only check the given local operations");
  auto* ctc_search = ctc_cmd->add_subcommand("search-noncausal", "first consistent process with no fixed order");
  ctc_search->add_option("--parties", parties)->required();
  ctc_search->add_option("--bits", bits)->required();
  auto* construct = app.add_subcommand("construct", "decision/search construction for one instance");
  construct->add_option("kind", kind)->required()->check(CLI::IsMember({"decision", "search"}));
  construct->add_option("manifest", path)->required();
  construct->add_option("--instance", instance)->required();
  engine_opts(construct);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "nccirc: error[" << kUsage << "] usage: " << one_line(e.what()) << "\n";
    return kUsage;
  }
  if (!engine.empty()) s.engine = engine;

  Runner r(s, out);
  try {
    if (!engine.empty()) (void)parse_engine(engine);
    if (*validate) return cmd_validate(r, path);
    if (*close_cmd) return cmd_close(r, path);
    if (*fixpoints) return cmd_fixpoints(r, s, path, limit);
    if (*decide_cmd) return cmd_decide(r, s, path);
    if (*factor) return cmd_factor(r, s, n, mode, layout);
    if (*ctc_check) return cmd_ctc_check(r, path);
    if (*ctc_decide) return cmd_ctc_decide(r, path, waive);
    if (*ctc_search) return cmd_ctc_search(r, parties, bits);
    if (*construct) return cmd_construct(r, s, kind, path, instance);
    throw Exit{kUsage, "usage", "no command"};
  } catch (const Exit& e) {
    err << "nccirc: error[" << e.code << "] " << e.kind << ": " << one_line(e.message) << "\n";
    return e.code;
  } catch (const ParseError& e) {
    err << "nccirc: error[" << kUsage << "] parse: " << one_line(e.what()) << "\n";
    return kUsage;
  } catch (const ManifestError& e) {
    err << "nccirc: error[" << kUsage << "] manifest: " << one_line(e.what()) << "\n";
    return kUsage;
  } catch (const CapacityError& e) {
    err << "nccirc: error[" << kResource << "] capacity: " << one_line(e.what()) << "\n";
    return kResource;
  } catch (const TimeoutError& e) {
    err << "nccirc: error[" << kResource << "] timeout: " << one_line(e.what()) << "\n";
    return kResource;
  } catch (const ctc::BudgetExceeded& e) {
    err << "nccirc: error[" << kResource << "] budget: " << one_line(e.what()) << "\n";
    return kResource;
  } catch (const std::invalid_argument& e) {
    err << "nccirc: error[" << kUsage << "] usage: " << one_line(e.what()) << "\n";
    return kUsage;
  } catch (const CircuitError& e) {
    err << "nccirc: error[" << kUsage << "] circuit: " << one_line(e.what()) << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "nccirc: error[" << kUsage << "] error: " << one_line(e.what()) << "\n";
    return kUsage;
  }
}

}  // namespace nccirc::cli
