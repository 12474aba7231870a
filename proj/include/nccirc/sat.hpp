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

// A small conflict-driven clause-learning SAT solver: two watched literals,
// first-UIP learning with local minimization, VSIDS, phase saving, Luby
// restarts and activity-based learnt clause reduction. Incremental: clauses
// may be added between calls and each call may carry assumptions.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace nccirc::sat {

using Var = std::uint32_t;

struct Lit {
  std::uint32_t code = 0;  // 2 * var + negated

  static constexpr Lit make(Var v, bool negated = false) { return Lit{2 * v + (negated ? 1u : 0u)}; }
  constexpr Var var() const { return code >> 1; }
  constexpr bool negated() const { return code & 1u; }
  constexpr Lit operator~() const { return Lit{code ^ 1u}; }
  friend constexpr bool operator==(Lit, Lit) = default;
};

enum class Result { Sat, Unsat, Unknown };

class Solver {
 public:
  struct Options {
    double var_decay = 0.85;     // faster than the usual 0.95; helps on arithmetic circuits
    double restart_unit = 100;   // conflicts per Luby unit
    bool default_phase = true;   // before phase saving has a value
  };

  Solver() = default;
  explicit Solver(const Options& options) : options_(options) {}

  Var new_var() {
    const Var v = static_cast<Var>(assigns_.size());
    assigns_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    activity_.push_back(0.0);
    polarity_.push_back(options_.default_phase ? 0 : 1);
    seen_.push_back(0);
    decision_.push_back(1);
    heap_index_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(v);
    return v;
  }

  std::size_t num_vars() const { return assigns_.size(); }
  std::size_t num_clauses() const { return num_original_; }
  std::uint64_t conflicts() const { return conflicts_; }
  std::uint64_t decisions() const { return decisions_; }
  std::uint64_t propagations() const { return propagations_; }

  /// Adds a clause at the root level. Returns false once the formula is known
  /// to be unsatisfiable.
  bool add_clause(std::span<const Lit> lits) {
    if (!ok_) return false;
    cancel_until(0);
    std::vector<Lit> c(lits.begin(), lits.end());
    std::sort(c.begin(), c.end(), [](Lit a, Lit b) { return a.code < b.code; });
    std::vector<Lit> kept;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i + 1 < c.size() && c[i + 1] == ~c[i]) return true;  // tautology
      if (!kept.empty() && kept.back() == c[i]) continue;
      const std::uint8_t v = value(c[i]);
      if (v == kTrue) return true;
      if (v == kFalse) continue;
      kept.push_back(c[i]);
    }
    if (kept.empty()) return ok_ = false;
    if (kept.size() == 1) {
      assign(kept[0], kNoReason);
      if (propagate() != kNoReason) ok_ = false;
      return ok_;
    }
    attach(alloc(kept, false));
    ++num_original_;
    return true;
  }

  bool add_clause(std::initializer_list<Lit> lits) {
    return add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }

  /// Preferred value when `v` is picked as a decision (default false).
  void set_phase(Var v, bool value) { polarity_[v] = value ? 0 : 1; }

  /// Raises the initial branching priority of `v`.
  void set_priority(Var v, double activity) {
    activity_[v] = activity;
    if (heap_index_[v] >= 0) sift_up(static_cast<std::size_t>(heap_index_[v]));
  }

  /// Excludes `v` from branching; it is then only ever set by propagation.
  void set_decision(Var v, bool enabled) { decision_[v] = enabled; }

  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) { deadline_ = deadline; }

  Result solve(std::span<const Lit> assumptions = {}) {
    model_.clear();
    if (!ok_) return Result::Unsat;
    assumptions_.assign(assumptions.begin(), assumptions.end());
    Result status = Result::Unknown;
    for (int restart = 0; status == Result::Unknown; ++restart) {
      const double budget = luby(2.0, restart) * options_.restart_unit;
      status = search(static_cast<std::uint64_t>(budget));
      if (status == Result::Unknown && out_of_time()) break;
    }
    if (status == Result::Sat) {
      model_.resize(assigns_.size());
      for (Var v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == kTrue;
    }
    cancel_until(0);
    return status;
  }

  /// Value of `v` in the last satisfying assignment.
  bool model_value(Var v) const { return model_.at(v); }
  bool model_value(Lit l) const { return model_value(l.var()) != l.negated(); }

 private:
  static constexpr std::uint8_t kTrue = 0, kFalse = 1, kUndef = 2;
  static constexpr std::uint32_t kNoReason = 0xFFFFFFFFu;

  struct Watcher {
    std::uint32_t cref;
    Lit blocker;
  };

  // Clause layout in arena_: [size | learnt << 31] [activity as float bits] lits...
  std::uint32_t alloc(const std::vector<Lit>& lits, bool learnt) {
    const std::uint32_t cref = static_cast<std::uint32_t>(arena_.size());
    arena_.push_back(static_cast<std::uint32_t>(lits.size()) | (learnt ? 0x80000000u : 0u));
    arena_.push_back(0);
    for (Lit l : lits) arena_.push_back(l.code);
    if (learnt) learnts_.push_back(cref);
    return cref;
  }
  std::uint32_t csize(std::uint32_t cref) const { return arena_[cref] & 0x7FFFFFFFu; }
  bool learnt(std::uint32_t cref) const { return arena_[cref] & 0x80000000u; }
  std::uint32_t* lits(std::uint32_t cref) { return &arena_[cref + 2]; }
  float cact(std::uint32_t cref) const { return std::bit_cast<float>(arena_[cref + 1]); }
  void set_cact(std::uint32_t cref, float a) { arena_[cref + 1] = std::bit_cast<std::uint32_t>(a); }

  void attach(std::uint32_t cref) {
    const std::uint32_t* c = lits(cref);
    watches_[c[0] ^ 1u].push_back({cref, Lit{c[1]}});
    watches_[c[1] ^ 1u].push_back({cref, Lit{c[0]}});
  }

  std::uint8_t value(Lit l) const {
    const std::uint8_t a = assigns_[l.var()];
    return a == kUndef ? kUndef : static_cast<std::uint8_t>(a ^ static_cast<std::uint8_t>(l.negated()));
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void assign(Lit l, std::uint32_t reason) {
    const Var v = l.var();
    assigns_[v] = l.negated() ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  std::uint32_t propagate() {
    std::uint32_t conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      const Lit p = trail_[qhead_++];
      ++propagations_;
      auto& ws = watches_[p.code];
      std::size_t i = 0, j = 0;
      const Lit false_lit = ~p;
      while (i < ws.size()) {
        const Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        std::uint32_t* c = lits(w.cref);
        if (c[0] == false_lit.code) std::swap(c[0], c[1]);
        ++i;
        const Lit first{c[0]};
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        const std::uint32_t n = csize(w.cref);
        bool moved = false;
        for (std::uint32_t k = 2; k < n; ++k) {
          if (value(Lit{c[k]}) != kFalse) {
            std::swap(c[1], c[k]);
            watches_[c[1] ^ 1u].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == kFalse) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          assign(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void analyze(std::uint32_t confl, std::vector<Lit>& out_learnt, int& out_btlevel) {
    int path = 0;
    Lit p{0xFFFFFFFFu};
    out_learnt.clear();
    out_learnt.push_back(Lit{});
    std::size_t index = trail_.size();
    do {
      if (learnt(confl)) bump_clause(confl);
      const std::uint32_t* c = lits(confl);
      const std::uint32_t n = csize(confl);
      for (std::uint32_t k = (p.code == 0xFFFFFFFFu ? 0 : 1); k < n; ++k) {
        const Lit q{c[k]};
        const Var v = q.var();
        if (!seen_[v] && level_[v] > 0) {
          bump_var(v);
          seen_[v] = 1;
          if (level_[v] >= decision_level()) {
            ++path;
          } else {
            out_learnt.push_back(q);
          }
        }
      }
      while (!seen_[trail_[--index].var()]) {
      }
      p = trail_[index];
      confl = reason_[p.var()];
      seen_[p.var()] = 0;
      --path;
    } while (path > 0);
    out_learnt[0] = ~p;

    // local minimization: drop literals implied by other literals of the clause
    analyze_toclear_.assign(out_learnt.begin(), out_learnt.end());
    std::size_t j = 1;
    for (std::size_t i = 1; i < out_learnt.size(); ++i) {
      const Var v = out_learnt[i].var();
      const std::uint32_t r = reason_[v];
      bool redundant = r != kNoReason;
      if (redundant) {
        const std::uint32_t* c = lits(r);
        for (std::uint32_t k = 0; k < csize(r); ++k) {
          const Var u = c[k] >> 1;
          if (u == v) continue;
          if (!seen_[u] && level_[u] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) out_learnt[j++] = out_learnt[i];
    }
    out_learnt.resize(j);

    out_btlevel = 0;
    if (out_learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < out_learnt.size(); ++i) {
        if (level_[out_learnt[i].var()] > level_[out_learnt[max_i].var()]) max_i = i;
      }
      std::swap(out_learnt[1], out_learnt[max_i]);
      out_btlevel = level_[out_learnt[1].var()];
    }
    for (Lit l : analyze_toclear_) seen_[l.var()] = 0;
  }

  void cancel_until(int level) {
    if (decision_level() <= level) return;
    for (std::size_t c = trail_.size(); c-- > trail_lim_[level];) {
      const Var v = trail_[c].var();
      assigns_[v] = kUndef;
      reason_[v] = kNoReason;
      polarity_[v] = trail_[c].negated();
      if (heap_index_[v] < 0) heap_insert(v);
    }
    qhead_ = trail_lim_[level];
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
  }

  std::optional<Lit> pick_branch() {
    while (!heap_.empty()) {
      const Var v = heap_pop();
      if (assigns_[v] == kUndef && decision_[v]) return Lit::make(v, polarity_[v] != 0);
    }
    return std::nullopt;
  }

  bool out_of_time() const { return deadline_ && std::chrono::steady_clock::now() >= *deadline_; }

  Result search(std::uint64_t conflict_budget) {
    std::uint64_t local_conflicts = 0;
    std::vector<Lit> learnt_clause;
    for (;;) {
      const std::uint32_t confl = propagate();
      if (confl != kNoReason) {
        ++conflicts_;
        ++local_conflicts;
        if (decision_level() == 0) {
          ok_ = false;
          return Result::Unsat;
        }
        int bt = 0;
        analyze(confl, learnt_clause, bt);
        cancel_until(bt);
        if (learnt_clause.size() == 1) {
          assign(learnt_clause[0], kNoReason);
        } else {
          const std::uint32_t cref = alloc(learnt_clause, true);
          attach(cref);
          bump_clause(cref);
          assign(learnt_clause[0], cref);
        }
        var_inc_ /= options_.var_decay;
        cla_inc_ /= 0.999f;
        if ((conflicts_ & 255u) == 0 && out_of_time()) {
          cancel_until(0);
          return Result::Unknown;
        }
        continue;
      }
      if (local_conflicts >= conflict_budget) {
        cancel_until(0);
        return Result::Unknown;
      }
      if (learnts_.size() >= max_learnts_ + trail_.size()) reduce_db();

      std::optional<Lit> next;
      while (static_cast<std::size_t>(decision_level()) < assumptions_.size()) {
        const Lit a = assumptions_[decision_level()];
        const std::uint8_t v = value(a);
        if (v == kTrue) {
          trail_lim_.push_back(trail_.size());
        } else if (v == kFalse) {
          cancel_until(0);
          return Result::Unsat;
        } else {
          next = a;
          break;
        }
      }
      if (!next) {
        next = pick_branch();
        if (!next) return Result::Sat;
      }
      ++decisions_;
      trail_lim_.push_back(trail_.size());
      assign(*next, kNoReason);
    }
  }

  bool locked(std::uint32_t cref) {
    const Lit first{lits(cref)[0]};
    return value(first) == kTrue && reason_[first.var()] == cref;
  }

  void reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(),
              [&](std::uint32_t a, std::uint32_t b) { return cact(a) < cact(b); });
    std::vector<std::uint32_t> keep;
    const std::size_t half = learnts_.size() / 2;
    std::vector<std::uint8_t> removed_flag;
    std::vector<std::uint32_t> removed;
    for (std::size_t i = 0; i < learnts_.size(); ++i) {
      const std::uint32_t cref = learnts_[i];
      if (i < half && csize(cref) > 2 && !locked(cref)) {
        removed.push_back(cref);
      } else {
        keep.push_back(cref);
      }
    }
    max_learnts_ = static_cast<std::size_t>(static_cast<double>(max_learnts_) * 1.1);
    if (removed.empty()) return;
    std::sort(removed.begin(), removed.end());
    auto is_removed = [&](std::uint32_t cref) {
      return std::binary_search(removed.begin(), removed.end(), cref);
    };
    for (auto& ws : watches_) {
      ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watcher& w) { return is_removed(w.cref); }),
               ws.end());
    }
    learnts_ = std::move(keep);
    for (std::uint32_t cref : removed) wasted_ += 2 + csize(cref);
    if (wasted_ > arena_.size() / 2) compact();
  }

  void compact() {
    // Every live clause is reachable from the watch lists; rebuild the arena in
    // address order and remap watches and reasons.
    std::vector<std::uint32_t> live;
    for (auto& ws : watches_) {
      for (const Watcher& w : ws) live.push_back(w.cref);
    }
    std::sort(live.begin(), live.end());
    live.erase(std::unique(live.begin(), live.end()), live.end());
    std::vector<std::uint32_t> fresh;
    fresh.reserve(arena_.size() - wasted_);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> remap;
    remap.reserve(live.size());
    for (std::uint32_t cref : live) {
      remap.emplace_back(cref, static_cast<std::uint32_t>(fresh.size()));
      const std::uint32_t n = 2 + csize(cref);
      fresh.insert(fresh.end(), arena_.begin() + cref, arena_.begin() + cref + n);
    }
    auto lookup = [&](std::uint32_t cref) {
      auto it = std::lower_bound(remap.begin(), remap.end(), std::make_pair(cref, std::uint32_t{0}));
      return it->second;
    };
    for (auto& ws : watches_) {
      for (Watcher& w : ws) w.cref = lookup(w.cref);
    }
    for (Var v = 0; v < reason_.size(); ++v) {
      if (reason_[v] != kNoReason && assigns_[v] != kUndef) reason_[v] = lookup(reason_[v]);
    }
    for (auto& cref : learnts_) cref = lookup(cref);
    arena_ = std::move(fresh);
    wasted_ = 0;
  }

  void bump_var(Var v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_index_[v] >= 0) sift_up(static_cast<std::size_t>(heap_index_[v]));
  }

  void bump_clause(std::uint32_t cref) {
    set_cact(cref, cact(cref) + cla_inc_);
    if (cact(cref) > 1e20f) {
      for (std::uint32_t c : learnts_) set_cact(c, cact(c) * 1e-20f);
      cla_inc_ *= 1e-20f;
    }
  }

  // binary max-heap on activity
  bool heap_less(Var a, Var b) const { return activity_[a] > activity_[b]; }
  void heap_insert(Var v) {
    heap_index_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    sift_up(heap_.size() - 1);
  }
  Var heap_pop() {
    const Var top = heap_.front();
    heap_index_[top] = -1;
    heap_.front() = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_index_[heap_.front()] = 0;
      sift_down(0);
    }
    return top;
  }
  void sift_up(std::size_t i) {
    const Var v = heap_[i];
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!heap_less(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_index_[heap_[i]] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<int>(i);
  }
  void sift_down(std::size_t i) {
    const Var v = heap_[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap_.size()) break;
      if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
      if (!heap_less(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_index_[heap_[i]] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<int>(i);
  }

  static double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x = x % size;
    }
    double r = 1.0;
    for (int i = 0; i < seq; ++i) r *= y;
    return r;
  }

  bool ok_ = true;
  std::vector<std::uint32_t> arena_;
  std::vector<std::uint32_t> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::uint8_t> assigns_;
  std::vector<int> level_;
  std::vector<std::uint32_t> reason_;
  std::vector<double> activity_;
  std::vector<std::uint8_t> polarity_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::uint8_t> decision_;
  std::vector<int> heap_index_;
  std::vector<Var> heap_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::vector<Lit> assumptions_;
  std::vector<Lit> analyze_toclear_;
  std::vector<bool> model_;
  std::size_t qhead_ = 0;
  std::size_t num_original_ = 0;
  std::size_t max_learnts_ = 20000;
  std::size_t wasted_ = 0;
  std::uint64_t conflicts_ = 0;
  std::uint64_t decisions_ = 0;
  std::uint64_t propagations_ = 0;
  double var_inc_ = 1.0;
  Options options_;

  float cla_inc_ = 1.0f;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

}  // namespace nccirc::sat
