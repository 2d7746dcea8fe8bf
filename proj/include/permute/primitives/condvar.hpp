#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "permute/core/model_state.hpp"
#include "permute/core/transition.hpp"
#include "permute/primitives/mutex.hpp"
#include "permute/primitives/policy.hpp"

namespace permute {

// Condition variable with policy-driven signal delivery and a bounded number
// of spurious wakeups.
//
// fifo/lifo signals grant a specific waiter (front/back of the queue);
// arbitrary signals add a floating credit any waiter may claim. A signal with
// no ungranted waiter is lost, as in POSIX.
class CondObj final : public ObjectBase<CondObj> {
 public:
  CondObj(std::string name, WakeupPolicy policy, std::uint32_t spurious_max)
      : ObjectBase(std::move(name)), waiters_(policy), spurious_max_(spurious_max) {}

  std::string_view kind() const override { return "cond"; }

  WakeupPolicy policy() const noexcept { return waiters_.policy(); }
  const WaitQueue& waiters() const noexcept { return waiters_; }
  const std::vector<ThreadId>& grants() const noexcept { return grants_; }
  std::uint32_t credits() const noexcept { return credits_; }
  std::uint32_t spurious_max() const noexcept { return spurious_max_; }

  bool granted(ThreadId t) const { return std::binary_search(grants_.begin(), grants_.end(), t); }

  void enqueue(ThreadId t) { waiters_.add(t); }

  void signal() {
    const auto& q = waiters_.threads();
    switch (policy()) {
      case WakeupPolicy::Fifo:
        for (auto t : q)
          if (!granted(t)) return grant(t);
        return;
      case WakeupPolicy::Lifo:
        for (auto it = q.rbegin(); it != q.rend(); ++it)
          if (!granted(*it)) return grant(*it);
        return;
      default:
        if (grants_.size() + credits_ < q.size()) ++credits_;
        return;
    }
  }

  void broadcast() {
    grants_ = waiters_.threads();
    std::sort(grants_.begin(), grants_.end());
    credits_ = 0;
  }

  enum class WakeSource { Grant, Credit, Spurious };

  WakeSource wake(ThreadId t) {
    waiters_.remove(t);
    if (granted(t)) {
      std::erase(grants_, t);
      return WakeSource::Grant;
    }
    if (credits_ > 0) {
      --credits_;
      return WakeSource::Credit;
    }
    return WakeSource::Spurious;
  }

  void serialize(std::string& out) const override {
    wire::put(out, static_cast<std::uint64_t>(waiters_.size()));
    for (auto t : waiters_.threads()) wire::put(out, static_cast<std::uint64_t>(index_of(t)));
    wire::put(out, static_cast<std::uint64_t>(grants_.size()));
    for (auto t : grants_) wire::put(out, static_cast<std::uint64_t>(index_of(t)));
    wire::put(out, static_cast<std::uint64_t>(credits_));
  }

  std::string describe() const override {
    std::string g = "[";
    for (std::size_t i = 0; i < grants_.size(); ++i) g += (i ? " " : "") + std::to_string(index_of(grants_[i]));
    return "waiters=" + permute::describe(waiters_) + " grants=" + g + "] credits=" + std::to_string(credits_) +
           " policy=" + std::string(to_string(policy())) + " spurious_max=" + std::to_string(spurious_max_);
  }

 private:
  void grant(ThreadId t) { grants_.insert(std::upper_bound(grants_.begin(), grants_.end(), t), t); }

  WaitQueue waiters_;
  std::vector<ThreadId> grants_;
  std::uint32_t credits_ = 0;
  std::uint32_t spurious_max_;
};

class CondTransition : public Transition {
 public:
  CondTransition(ThreadId executor, ObjectId cond, WakeupPolicy policy) : Transition(executor, cond), policy_(policy) {}

  ObjectId cond() const { return *object(); }
  WakeupPolicy policy() const noexcept { return policy_; }

 protected:
  bool same_cond(const Transition& other) const {
    auto* c = as<CondTransition>(other);
    return c != nullptr && c->cond() == cond();
  }

 private:
  WakeupPolicy policy_;
};

// Transitions that also operate on the paired mutex.
class CondMutexTransition : public CondTransition {
 public:
  CondMutexTransition(ThreadId executor, ObjectId cond, ObjectId mutex, WakeupPolicy policy)
      : CondTransition(executor, cond, policy), mutex_(mutex) {}

  ObjectId mutex() const noexcept { return mutex_; }

  std::string label() const override { return Transition::label() + " " + std::to_string(index_of(mutex_)); }

 protected:
  bool touches_mutex(const Transition& other) const {
    if (auto* m = as<MutexTransition>(other)) return m->mutex() == mutex_;
    if (auto* c = as<CondMutexTransition>(other)) return c->mutex() == mutex_;
    return false;
  }

 private:
  ObjectId mutex_;
};

class CondWake;

// First half of cond_wait: releases the mutex and joins the wait queue.
class CondEnqueue final : public CondMutexTransition {
 public:
  using CondMutexTransition::CondMutexTransition;

  std::string_view kind() const override { return "cond_enqueue"; }
  bool enabled_in(const ModelState&) const override { return true; }
  bool dependent_with(const Transition& other) const override {
    if (touches_mutex(other)) return true;
    if (!same_cond(other)) return false;
    if (as<CondEnqueue>(other)) return enqueues_conflict(policy());
    return true;
  }

  std::optional<Finding> check(const ModelState& pre) const override {
    if (pre.get<MutexObj>(mutex()).owner() != executor())
      return Finding{FindingKind::UsageError, "cond_wait on " + pre.object(cond()).name() + " without holding mutex " +
                                                  pre.object(mutex()).name()};
    return std::nullopt;
  }

 protected:
  void apply(ModelState& s) const override {
    if (s.get<MutexObj>(mutex()).owner() == executor()) s.edit<MutexObj>(mutex()).release();
    s.edit<CondObj>(cond()).enqueue(executor());
  }
};

// Second half of cond_wait: leaves the queue on a grant, a credit, or a
// spurious wakeup, and reacquires the mutex.
class CondWake final : public CondMutexTransition {
 public:
  using CondMutexTransition::CondMutexTransition;

  std::string_view kind() const override { return "cond_wake"; }

  bool enabled_in(const ModelState& s) const override {
    const auto& c = s.get<CondObj>(cond());
    if (!c.waiters().contains(executor())) return false;
    const bool released = c.granted(executor()) || c.credits() > 0 || s.spurious_used(cond()) < c.spurious_max();
    return released && s.get<MutexObj>(mutex()).can_reacquire();
  }
  bool dependent_with(const Transition& other) const override { return touches_mutex(other) || same_cond(other); }

 protected:
  void apply(ModelState& s) const override {
    if (s.edit<CondObj>(cond()).wake(executor()) == CondObj::WakeSource::Spurious) s.note_spurious(cond());
    s.edit<MutexObj>(mutex()).acquire(executor());
  }
};

class CondSignal final : public CondTransition {
 public:
  using CondTransition::CondTransition;

  std::string_view kind() const override { return "cond_signal"; }
  bool enabled_in(const ModelState&) const override { return true; }
  bool dependent_with(const Transition& other) const override { return same_cond(other); }

 protected:
  void apply(ModelState& s) const override { s.edit<CondObj>(cond()).signal(); }
};

class CondBroadcast final : public CondTransition {
 public:
  using CondTransition::CondTransition;

  std::string_view kind() const override { return "cond_broadcast"; }
  bool enabled_in(const ModelState&) const override { return true; }
  bool dependent_with(const Transition& other) const override { return same_cond(other); }

 protected:
  void apply(ModelState& s) const override { s.edit<CondObj>(cond()).broadcast(); }
};

}  // namespace permute
