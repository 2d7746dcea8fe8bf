#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "permute/core/clock_vector.hpp"
#include "permute/core/fingerprint.hpp"
#include "permute/core/model_state.hpp"
#include "permute/core/relations.hpp"
#include "permute/dpor/report.hpp"
#include "permute/primitives/variable.hpp"
#include "permute/runtime/session.hpp"

namespace permute {

struct StackEntry {
  ModelState pre_state;
  std::vector<ThreadId> enabled;  // ascending
  std::set<ThreadId> backtrack;
  std::set<ThreadId> done;
  std::vector<TransitionPtr> sleep;
  std::optional<ThreadId> chosen;

  bool is_enabled(ThreadId t) const { return std::binary_search(enabled.begin(), enabled.end(), t); }
};

inline bool in_sleep(const std::vector<TransitionPtr>& sleep, const Transition& t) {
  const auto key = t.key();
  return std::any_of(sleep.begin(), sleep.end(), [&](const TransitionPtr& s) { return s->key() == key; });
}

// Smallest thread in backtrack minus done whose pending transition is not asleep.
inline std::optional<ThreadId> select_next(const StackEntry& e) {
  for (ThreadId t : e.backtrack) {
    if (e.done.contains(t)) continue;
    const auto& pending = e.pre_state.thread(t).pending;
    if (pending && in_sleep(e.sleep, *pending)) continue;
    return t;
  }
  return std::nullopt;
}

inline std::vector<TransitionPtr> propagate_sleep_set(const std::vector<TransitionPtr>& sleep, const Transition& executed) {
  std::vector<TransitionPtr> out;
  for (const auto& t : sleep)
    if (!dependent(*t, executed)) out.push_back(t);
  return out;
}

// Flanagan-Godefroid backtrack rule for one frontier transition `next`.
// stack[i - 1] is the pre-state frame of trace step i.
inline void update_backtrack_sets(std::vector<StackEntry>& stack, const CausalHistory& trace, const Transition& next) {
  const ThreadId p = next.executor();
  for (std::size_t i = trace.size(); i >= 1; --i) {
    const Transition& s = trace.step(i);
    if (!dependent(s, next) || !coenabled(s, next) || trace.happens_before(i, p)) continue;
    if (i - 1 >= stack.size()) return;
    StackEntry& frame = stack[i - 1];
    if (frame.is_enabled(p))
      frame.backtrack.insert(p);
    else
      frame.backtrack.insert(frame.enabled.begin(), frame.enabled.end());
    return;
  }
}

// Classifies a state in which no further step is taken. Blocked threads only
// make a deadlock when no thread was stopped by the budget; a budget-cut
// thread might have released them.
inline Verdict detect_deadlock(const ModelState& s, Budget budget) {
  bool alive = false, blocked = false, cut = false;
  for (std::uint32_t i = 0; i < s.thread_count(); ++i) {
    const ThreadId t{i};
    const auto& rec = s.thread(t);
    if (rec.exited) continue;
    if (thread_enabled(s, t, budget)) return Verdict::Live;
    alive = true;
    if (budget_spent(rec, budget))
      cut = true;
    else
      blocked = true;
  }
  if (!alive) return Verdict::Completed;
  return blocked && !cut ? Verdict::Deadlock : Verdict::BudgetExhausted;
}

class Explorer {
 public:
  Explorer(std::shared_ptr<const Program> program, ExplorationConfig config,
           std::shared_ptr<const TransitionRegistry> registry = builtin_registry())
      : config_(std::move(config)), session_(std::move(program), config_.model, std::move(registry)) {}

  void on_trace(TraceSink sink) { sink_ = std::move(sink); }

  ExplorationReport run() {
    report_ = {};
    races_seen_.clear();
    stack_.clear();
    snapshots_.clear();
    history_ = {};
    schedule_.clear();
    stopped_ = false;
    trace_has_race_ = false;

    session_.reset();
    if (const auto& fault = session_.startup_fault()) {
      record_trace(Verdict::Fault, *fault, session_.state());
      return report_;
    }
    snapshots_ok_ = session_.try_clone().has_value();
    if (!open_frame({})) return report_;

    while (!stack_.empty() && !stopped_) {
      const std::size_t depth = stack_.size() - 1;
      auto next = select_next(stack_[depth]);
      if (!next) {
        stack_.pop_back();
        snapshots_.pop_back();
        if (!stack_.empty()) child_finished();
        continue;
      }
      seek(depth);
      StackEntry& frame = stack_[depth];
      frame.done.insert(*next);
      frame.chosen = *next;

      StepOutcome out = session_.step(*next);
      if (!out.executed->is_bookkeeping()) ++report_.total_transitions;
      history_.push(out.executed);
      schedule_.push_back(out.record);

      auto child_sleep = config_.sleep_sets ? propagate_sleep_set(stack_[depth].sleep, *out.executed)
                                            : std::vector<TransitionPtr>{};
      bool descended = false;
      if (out.fault) {
        record_trace(Verdict::Fault, *out.fault, session_.state());
      } else if (out.finding) {
        if (out.finding->kind == FindingKind::Assertion)
          record_trace(Verdict::AssertionFailure, out.finding->message, session_.state());
        else
          record_trace(Verdict::Fault, out.finding->message, session_.state());
      } else {
        descended = open_frame(std::move(child_sleep));
      }
      if (!descended) child_finished();
    }
    return report_;
  }

  const ExplorationConfig& config() const noexcept { return config_; }

 private:
  // Builds the frame for the session's current state. Returns false when the
  // state is a leaf (trace recorded) or a sleep-blocked branch.
  bool open_frame(std::vector<TransitionPtr> sleep) {
    const ModelState& state = session_.state();
    const Budget budget = config_.max_depth_per_thread;

    for (std::uint32_t i = 0; i < state.thread_count(); ++i) {
      const ThreadId t{i};
      const auto& rec = state.thread(t);
      if (rec.exited || !rec.pending || budget_spent(rec, budget)) continue;
      update_backtrack_sets(stack_, history_, *rec.pending);
    }

    StackEntry frame;
    frame.pre_state = state;
    frame.enabled = enabled_threads(state, budget);
    check_races(frame);

    if (frame.enabled.empty()) {
      const Verdict v = detect_deadlock(state, budget);
      record_trace(v, v == Verdict::Deadlock ? "deadlock" : "", state);
      return false;
    }
    frame.sleep = std::move(sleep);
    for (ThreadId t : frame.enabled) {
      if (!in_sleep(frame.sleep, *state.thread(t).pending)) {
        frame.backtrack.insert(t);
        break;
      }
    }
    if (frame.backtrack.empty()) {
      ++report_.sleep_blocked;
      trace_has_race_ = false;
      return false;
    }
    stack_.push_back(std::move(frame));
    snapshots_.push_back(snapshots_ok_ ? session_.try_clone() : std::nullopt);
    return true;
  }

  // After the subtree under the top frame's chosen thread is done.
  void child_finished() {
    StackEntry& frame = stack_.back();
    const std::size_t depth = stack_.size() - 1;
    if (config_.sleep_sets && frame.chosen) frame.sleep.push_back(frame.pre_state.thread(*frame.chosen).pending);
    history_.truncate(depth);
    schedule_.resize(depth);
  }

  void seek(std::size_t depth) {
    if (session_.position() == depth && history_.size() == depth) return;
    if (snapshots_[depth]) {
      session_ = std::move(*snapshots_[depth]->try_clone());
    } else {
      session_.replay(std::span<const ScheduleStep>(schedule_.data(), depth));
    }
  }

  void check_races(const StackEntry& frame) {
    const auto& state = frame.pre_state;
    for (std::size_t a = 0; a < frame.enabled.size(); ++a) {
      auto* x = as<VarAccess>(*state.thread(frame.enabled[a]).pending);
      if (!x) continue;
      for (std::size_t b = a + 1; b < frame.enabled.size(); ++b) {
        auto* y = as<VarAccess>(*state.thread(frame.enabled[b]).pending);
        if (!y || y->var() != x->var() || (!x->is_write() && !y->is_write())) continue;
        trace_has_race_ = true;
        const std::string kinds = x->is_write() && y->is_write() ? "write/write" : "read/write";
        if (!races_seen_.insert({x->var(), kinds}).second) continue;
        report_.data_races.push_back(DataRace{x->var(), frame.enabled[a], frame.enabled[b], report_.traces + 1, kinds});
      }
    }
  }

  void record_trace(Verdict v, const std::string& message, const ModelState& final_state) {
    const std::uint64_t k = ++report_.traces;
    bool finding = false;
    switch (v) {
      case Verdict::Deadlock:
        ++report_.deadlocks;
        if (!report_.first_deadlock_trace) report_.first_deadlock_trace = k;
        finding = true;
        if (config_.stop_at_first_deadlock) stopped_ = true;
        break;
      case Verdict::BudgetExhausted: ++report_.budget_exhausted_traces; break;
      case Verdict::AssertionFailure:
        report_.assertion_failures.push_back({k, message});
        finding = true;
        if (config_.stop_at_first_failure) stopped_ = true;
        break;
      case Verdict::Fault:
        report_.faults.push_back({k, message});
        finding = true;
        if (config_.stop_at_first_failure) stopped_ = true;
        break;
      default: break;
    }
    if (sink_ && (finding || trace_has_race_ || config_.keep_all_traces))
      sink_(TraceRecord{k, v, schedule_, fingerprint(final_state), message, trace_has_race_});
    trace_has_race_ = false;
  }

  ExplorationConfig config_;
  Session session_;
  TraceSink sink_;
  ExplorationReport report_;
  std::set<std::pair<std::string, std::string>> races_seen_;
  std::vector<StackEntry> stack_;
  std::vector<std::optional<Session>> snapshots_;
  CausalHistory history_;
  Schedule schedule_;
  bool snapshots_ok_ = false;
  bool stopped_ = false;
  bool trace_has_race_ = false;
};

inline ExplorationReport explore(std::shared_ptr<const Program> program, const ExplorationConfig& config,
                                 TraceSink sink = {}) {
  Explorer e(std::move(program), config);
  e.on_trace(std::move(sink));
  return e.run();
}

}  // namespace permute
