#pragma once

#include <cstdint>
#include <string>

#include "permute/core/model_state.hpp"
#include "permute/core/transition.hpp"
#include "permute/primitives/policy.hpp"

namespace permute {

// Counting semaphore. `value` is the classic count; enqueued waiters are
// tracked separately and never folded into it.
class SemObj final : public ObjectBase<SemObj> {
 public:
  SemObj(std::string name, std::int64_t value, WakeupPolicy policy)
      : ObjectBase(std::move(name)), value_(value), waiters_(policy) {}

  std::string_view kind() const override { return "sem"; }

  std::int64_t value() const noexcept { return value_; }
  WakeupPolicy policy() const noexcept { return waiters_.policy(); }
  const WaitQueue& waiters() const noexcept { return waiters_; }

  bool can_finish(ThreadId t) const { return value_ > 0 && waiters_.eligible(t); }

  void post() { ++value_; }
  void enqueue(ThreadId t) { waiters_.add(t); }
  void finish(ThreadId t) {
    --value_;
    waiters_.remove(t);
  }
  void take() { --value_; }

  void serialize(std::string& out) const override {
    wire::put_signed(out, value_);
    wire::put(out, static_cast<std::uint64_t>(waiters_.size()));
    for (auto t : waiters_.threads()) wire::put(out, static_cast<std::uint64_t>(index_of(t)));
  }

  std::string describe() const override {
    return "value=" + std::to_string(value_) + " queue=" + permute::describe(waiters_) +
           " policy=" + std::string(to_string(policy()));
  }

 private:
  std::int64_t value_;
  WaitQueue waiters_;
};

class SemTransition : public Transition {
 public:
  SemTransition(ThreadId executor, ObjectId sem, WakeupPolicy policy) : Transition(executor, sem), policy_(policy) {}

  ObjectId sem() const { return *object(); }
  WakeupPolicy policy() const noexcept { return policy_; }

 protected:
  template <class... Kinds>
  bool same_sem_is(const Transition& other) const {
    auto* s = as<SemTransition>(other);
    return s != nullptr && s->sem() == sem() && (... || (as<Kinds>(other) != nullptr));
  }

 private:
  WakeupPolicy policy_;
};

class SemPost;
class SemGetValue;
class SemEnqueue;
class SemWaitFinish;
class SemWait;

class SemPost final : public SemTransition {
 public:
  using SemTransition::SemTransition;

  std::string_view kind() const override { return "sem_post"; }
  bool enabled_in(const ModelState&) const override { return true; }
  // post-post commutes; enqueue does not touch the count.
  bool dependent_with(const Transition& other) const override {
    return same_sem_is<SemWaitFinish, SemWait, SemGetValue>(other);
  }

 protected:
  void apply(ModelState& s) const override { s.edit<SemObj>(sem()).post(); }
};

class SemGetValue final : public SemTransition {
 public:
  using SemTransition::SemTransition;

  std::string_view kind() const override { return "sem_getvalue"; }
  bool enabled_in(const ModelState&) const override { return true; }
  bool dependent_with(const Transition& other) const override {
    return same_sem_is<SemPost, SemWaitFinish, SemWait>(other);
  }
  std::int64_t observe(const ModelState& pre) const override { return pre.get<SemObj>(sem()).value(); }
};

class SemEnqueue final : public SemTransition {
 public:
  using SemTransition::SemTransition;

  std::string_view kind() const override { return "sem_enqueue"; }
  bool enabled_in(const ModelState&) const override { return true; }
  bool dependent_with(const Transition& other) const override {
    if (same_sem_is<SemEnqueue>(other)) return enqueues_conflict(policy());
    if (same_sem_is<SemWaitFinish>(other)) return policy() == WakeupPolicy::Lifo;
    return false;
  }

 protected:
  void apply(ModelState& s) const override { s.edit<SemObj>(sem()).enqueue(executor()); }
};

class SemWaitFinish final : public SemTransition {
 public:
  using SemTransition::SemTransition;

  std::string_view kind() const override { return "sem_wait"; }
  bool enabled_in(const ModelState& s) const override { return s.get<SemObj>(sem()).can_finish(executor()); }
  bool dependent_with(const Transition& other) const override {
    if (same_sem_is<SemEnqueue>(other)) return policy() == WakeupPolicy::Lifo;
    return same_sem_is<SemPost, SemWaitFinish, SemWait, SemGetValue>(other);
  }

  std::optional<Finding> check(const ModelState& pre) const override {
    if (!pre.get<SemObj>(sem()).waiters().contains(executor()))
      throw InvariantViolation("sem_wait finish without a prior enqueue");
    return std::nullopt;
  }

 protected:
  void apply(ModelState& s) const override { s.edit<SemObj>(sem()).finish(executor()); }
};

// Wait with the enqueue folded in: any waiter may proceed once value > 0.
class SemWait final : public SemTransition {
 public:
  using SemTransition::SemTransition;

  std::string_view kind() const override { return "sem_wait_fused"; }
  bool enabled_in(const ModelState& s) const override { return s.get<SemObj>(sem()).value() > 0; }
  bool dependent_with(const Transition& other) const override {
    return same_sem_is<SemPost, SemWaitFinish, SemWait, SemGetValue>(other);
  }

 protected:
  void apply(ModelState& s) const override { s.edit<SemObj>(sem()).take(); }
};

}  // namespace permute
