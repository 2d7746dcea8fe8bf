#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "permute/core/error.hpp"
#include "permute/core/fingerprint.hpp"
#include "permute/core/model_state.hpp"
#include "permute/primitives/thread_ops.hpp"
#include "permute/runtime/pending_op.hpp"
#include "permute/runtime/registry.hpp"
#include "permute/runtime/schedule.hpp"

namespace permute {

struct StepOutcome {
  TransitionPtr executed;
  std::int64_t result = 0;
  std::optional<Finding> finding;
  std::optional<std::string> fault;  // a thread body failed while advancing
  ScheduleStep record;
};

// One execution of a program under the checker's control. Thread bodies run
// their invisible code eagerly up to their next visible operation, which is
// parked in the model state as the thread's pending transition. step() grants
// exactly one pending transition.
class Session {
 public:
  Session(std::shared_ptr<const Program> program, ModelConfig config,
          std::shared_ptr<const TransitionRegistry> registry = builtin_registry())
      : program_(std::move(program)), registry_(std::move(registry)), config_(std::move(config)),
        decls_(program_->objects()) {
    for (std::size_t i = 0; i < decls_.size(); ++i) {
      const auto& d = decls_[i];
      if (!registry_->has_object_kind(d.kind)) throw ConfigurationError("unknown object kind '" + d.kind + "'");
      if (!ids_.emplace(d.name, ObjectId{static_cast<std::uint32_t>(i)}).second)
        throw ConfigurationError("object " + d.name + " declared twice");
    }
    reset();
  }

  Session(Session&&) noexcept = default;
  Session& operator=(Session&&) noexcept = default;

  const ModelState& state() const noexcept { return state_; }
  const ModelConfig& config() const noexcept { return config_; }
  const std::vector<ObjectDecl>& declarations() const noexcept { return decls_; }
  std::size_t position() const noexcept { return position_; }
  // Fault raised while bringing up the main thread, before any step.
  const std::optional<std::string>& startup_fault() const noexcept { return startup_fault_; }

  void reset() {
    state_ = ModelState{};
    state_.vars() = program_->initial_vars();
    runners_.clear();
    position_ = 0;
    startup_fault_.reset();
    const ThreadId main = state_.add_thread();
    runners_.emplace_back().body = program_->make_main();
    startup_fault_ = advance(main, 0, state_);
  }

  StepOutcome step(ThreadId t) {
    if (!state_.has_thread(t) || !state_.thread(t).pending)
      throw InvariantViolation("thread " + std::to_string(index_of(t)) + " has no pending transition");
    TransitionPtr pending = state_.thread(t).pending;
    if (!pending->enabled_in(state_))
      throw InvariantViolation("step of disabled transition " + pending->label());

    StepOutcome out;
    out.finding = pending->check(state_);
    out.result = pending->observe(state_);
    out.executed = pending->resolve(state_, pending);
    out.record = ScheduleStep{t, std::string(pending->kind()), subject_of(*pending, state_), out.executed->payload(),
                              pending->label()};
    ModelState next = perform(state_, *out.executed);
    ++position_;

    if (out.executed->is_bookkeeping() && next.thread(t).exited) {
      runners_[index_of(t)].body.reset();
    } else {
      if (out.executed->creates_thread()) {
        const ThreadId child = *out.executed->thread_target();
        auto& spawn = runners_[index_of(t)].spawn;
        if (index_of(child) != runners_.size()) throw InvariantViolation("thread ids out of step with the model");
        auto body = spawn ? spawn() : nullptr;
        spawn = nullptr;
        if (!body) throw ConfigurationError("create produced no thread body");
        runners_.emplace_back().body = std::move(body);
        out.fault = advance(child, 0, next);
      }
      if (!out.fault) out.fault = advance(t, out.result, next);
    }
    state_ = std::move(next);
    return out;
  }

  // Restarts the program and re-executes `prefix`, checking that each step
  // meets the operation it recorded.
  void replay(std::span<const ScheduleStep> prefix) {
    reset();
    if (startup_fault_ && !prefix.empty()) throw NondeterminismDetected(1, "program faulted at startup");
    continue_replay(prefix);
  }

  // Executes recorded steps from the current position with the same checks.
  void continue_replay(std::span<const ScheduleStep> steps) {
    for (const ScheduleStep& want : steps) {
      const std::size_t n = position_ + 1;
      if (!state_.has_thread(want.thread))
        throw NondeterminismDetected(n, "thread " + std::to_string(index_of(want.thread)) + " does not exist");
      const auto& rec = state_.thread(want.thread);
      if (rec.exited || !rec.pending)
        throw NondeterminismDetected(n, "thread " + std::to_string(index_of(want.thread)) + " has no pending operation");
      const Transition& t = *rec.pending;
      if (t.kind() != want.kind || subject_of(t, state_) != want.subject || (!want.label.empty() && t.label() != want.label))
        throw NondeterminismDetected(n, "expected " + want.kind + " " + want.subject + ", found " + std::string(t.kind()) +
                                            " " + subject_of(t, state_));
      if (!t.enabled_in(state_)) throw NondeterminismDetected(n, "recorded step " + want.kind + " is not enabled");
      auto out = step(want.thread);
      if (want.payload && out.executed->payload() != want.payload)
        throw NondeterminismDetected(n, "payload differs for " + want.kind);
    }
  }

  // Deep copy, available when every live thread body can be cloned.
  // Identifies the whole configuration: model state, queued halves of split
  // operations and every body's own state. nullopt if some body can't say.
  std::optional<std::string> configuration_key() const {
    std::string out = canonical_bytes(state_);
    for (const auto& r : runners_) {
      wire::put(out, static_cast<std::uint64_t>(r.queued.size()));
      for (const auto& q : r.queued) wire::put(out, q->label());
      if (!r.body) {
        wire::put(out, std::string("-"));
        continue;
      }
      auto snap = r.body->snapshot();
      if (!snap) return std::nullopt;
      wire::put(out, *snap);
    }
    return out;
  }

  std::optional<Session> try_clone() const {
    std::vector<Runner> copies;
    copies.reserve(runners_.size());
    for (const auto& r : runners_) {
      Runner c;
      if (r.body) {
        c.body = r.body->clone();
        if (!c.body) return std::nullopt;
      }
      c.queued = r.queued;
      c.spawn = r.spawn;
      copies.push_back(std::move(c));
    }
    return Session(*this, std::move(copies));
  }

 private:
  struct Runner {
    std::unique_ptr<LogicalThread> body;
    std::deque<TransitionPtr> queued;  // rest of a split operation
    ThreadFactory spawn;               // body for a pending create
  };

  Session(const Session& other, std::vector<Runner> runners)
      : program_(other.program_), registry_(other.registry_), config_(other.config_), decls_(other.decls_),
        ids_(other.ids_), state_(other.state_), runners_(std::move(runners)), position_(other.position_),
        startup_fault_(other.startup_fault_) {}

  // Parks the next transition of `t` in `state`. Returns a fault message if
  // the body failed.
  std::optional<std::string> advance(ThreadId t, std::int64_t result, ModelState& state) {
    Runner& r = runners_[index_of(t)];
    auto& rec = state.thread(t);
    if (!r.queued.empty()) {
      rec.pending = r.queued.front();
      r.queued.pop_front();
      return std::nullopt;
    }
    StepResult next;
    try {
      next = r.body->resume(result, state.vars());
    } catch (const ConfigurationError&) {
      throw;
    } catch (const InvariantViolation&) {
      throw;
    } catch (const std::exception& e) {
      rec.pending = nullptr;
      return "thread " + std::to_string(index_of(t)) + " crashed: " + e.what();
    }
    if (std::holds_alternative<Exited>(next)) {
      rec.pending = std::make_shared<const ThreadExit>(t);
      return std::nullopt;
    }
    const PendingOp& op = std::get<PendingOp>(next);
    BuildContext ctx{t, op, {}, state, config_};
    for (const auto& name : op.objects) {
      auto it = ids_.find(name);
      if (it == ids_.end()) throw ConfigurationError("operation '" + op.kind + "' names undeclared object " + name);
      if (!state.has_object(it->second)) state.add_object(it->second, registry_->make_object(decls_[index_of(it->second)], config_));
      ctx.objects.push_back(it->second);
    }
    auto transitions = registry_->build(ctx);
    rec.pending = transitions.front();
    r.queued.assign(transitions.begin() + 1, transitions.end());
    r.spawn = op.spawn;
    return std::nullopt;
  }

  std::shared_ptr<const Program> program_;
  std::shared_ptr<const TransitionRegistry> registry_;
  ModelConfig config_;
  std::vector<ObjectDecl> decls_;
  std::map<std::string, ObjectId, std::less<>> ids_;
  ModelState state_;
  std::vector<Runner> runners_;
  std::size_t position_ = 0;
  std::optional<std::string> startup_fault_;
};

}  // namespace permute
