#pragma once

#include <optional>
#include <string>

#include "permute/core/model_state.hpp"
#include "permute/core/transition.hpp"
#include "permute/primitives/policy.hpp"

namespace permute {

class MutexObj final : public ObjectBase<MutexObj> {
 public:
  MutexObj(std::string name, WakeupPolicy policy) : ObjectBase(std::move(name)), waiters_(policy) {}

  std::string_view kind() const override { return "mutex"; }

  const std::optional<ThreadId>& owner() const noexcept { return owner_; }
  WakeupPolicy policy() const noexcept { return waiters_.policy(); }
  const WaitQueue& waiters() const noexcept { return waiters_; }
  bool queued() const noexcept { return !is_arbitrary(policy()); }

  bool can_lock(ThreadId t) const { return !owner_ && (!queued() || waiters_.eligible(t)); }
  // Reacquisition from a condition-variable wait: queued lockers go first.
  bool can_reacquire() const { return !owner_ && (!queued() || waiters_.empty()); }

  void enqueue(ThreadId t) { waiters_.add(t); }
  void acquire(ThreadId t) {
    owner_ = t;
    waiters_.remove(t);
  }
  void release() { owner_.reset(); }

  void serialize(std::string& out) const override {
    wire::put(out, owner_ ? index_of(*owner_) + 1ULL : 0ULL);
    wire::put(out, static_cast<std::uint64_t>(waiters_.size()));
    for (auto t : waiters_.threads()) wire::put(out, static_cast<std::uint64_t>(index_of(t)));
  }

  std::string describe() const override {
    std::string out = "owner=" + (owner_ ? std::to_string(index_of(*owner_)) : std::string("none"));
    if (queued()) out += " queue=" + permute::describe(waiters_) + " policy=" + std::string(to_string(policy()));
    return out;
  }

 private:
  std::optional<ThreadId> owner_;
  WaitQueue waiters_;
};

class MutexTransition : public Transition {
 public:
  MutexTransition(ThreadId executor, ObjectId mutex, WakeupPolicy policy)
      : Transition(executor, mutex), policy_(policy) {}

  ObjectId mutex() const { return *object(); }
  WakeupPolicy policy() const noexcept { return policy_; }

 protected:
  bool same_mutex(const Transition& other) const {
    auto* m = as<MutexTransition>(other);
    return m != nullptr && m->mutex() == mutex();
  }

 private:
  WakeupPolicy policy_;
};

class MutexLockEnqueue;

class MutexLock final : public MutexTransition {
 public:
  using MutexTransition::MutexTransition;

  std::string_view kind() const override { return "mutex_lock"; }

  bool enabled_in(const ModelState& s) const override { return s.get<MutexObj>(mutex()).can_lock(executor()); }
  bool dependent_with(const Transition& other) const override;
  bool coenabled_with(const Transition& other) const override;

 protected:
  void apply(ModelState& s) const override { s.edit<MutexObj>(mutex()).acquire(executor()); }
};

class MutexLockEnqueue final : public MutexTransition {
 public:
  using MutexTransition::MutexTransition;

  std::string_view kind() const override { return "mutex_enqueue"; }

  bool enabled_in(const ModelState&) const override { return true; }
  bool dependent_with(const Transition& other) const override {
    if (!same_mutex(other)) return false;
    if (as<MutexLockEnqueue>(other)) return true;
    // Under lifo a newcomer changes who may acquire next.
    return as<MutexLock>(other) != nullptr && policy() == WakeupPolicy::Lifo;
  }

 protected:
  void apply(ModelState& s) const override { s.edit<MutexObj>(mutex()).enqueue(executor()); }
};

class MutexUnlock final : public MutexTransition {
 public:
  using MutexTransition::MutexTransition;

  std::string_view kind() const override { return "mutex_unlock"; }

  bool enabled_in(const ModelState&) const override { return true; }
  bool dependent_with(const Transition& other) const override {
    return same_mutex(other) && (as<MutexLock>(other) || as<MutexUnlock>(other));
  }
  bool coenabled_with(const Transition& other) const override {
    return !(same_mutex(other) && as<MutexLock>(other));
  }

  std::optional<Finding> check(const ModelState& pre) const override {
    if (pre.get<MutexObj>(mutex()).owner() != executor())
      return Finding{FindingKind::UsageError, "unlock of mutex " + pre.object(mutex()).name() + " by non-owner"};
    return std::nullopt;
  }

 protected:
  void apply(ModelState& s) const override {
    if (s.get<MutexObj>(mutex()).owner() == executor()) s.edit<MutexObj>(mutex()).release();
  }
};

inline bool MutexLock::dependent_with(const Transition& other) const {
  if (!same_mutex(other)) return false;
  if (as<MutexLockEnqueue>(other)) return policy() == WakeupPolicy::Lifo;
  return true;
}

inline bool MutexLock::coenabled_with(const Transition& other) const {
  return !(same_mutex(other) && as<MutexUnlock>(other));
}

}  // namespace permute
