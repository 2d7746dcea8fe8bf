#pragma once

#include <optional>

#include "permute/core/model_state.hpp"
#include "permute/core/transition.hpp"

namespace permute {

class ThreadCreate final : public Transition {
 public:
  explicit ThreadCreate(ThreadId executor, std::optional<ThreadId> child = std::nullopt)
      : Transition(executor, std::nullopt), child_(child) {}

  std::string_view kind() const override { return "thread_create"; }
  std::optional<std::int64_t> payload() const override {
    if (child_) return index_of(*child_);
    return std::nullopt;
  }

  bool enabled_in(const ModelState&) const override { return true; }
  // Thread ids are handed out in creation order.
  bool dependent_with(const Transition& other) const override { return as<ThreadCreate>(other) != nullptr; }

  std::int64_t observe(const ModelState& pre) const override { return static_cast<std::int64_t>(pre.thread_count()); }
  std::optional<ThreadId> thread_target() const override { return child_; }
  bool creates_thread() const override { return true; }

  TransitionPtr resolve(const ModelState& pre, TransitionPtr) const override {
    return std::make_shared<ThreadCreate>(executor(), ThreadId{static_cast<std::uint32_t>(pre.thread_count())});
  }

 protected:
  void apply(ModelState& s) const override { s.add_thread(); }

 private:
  std::optional<ThreadId> child_;
};

class ThreadJoin final : public Transition {
 public:
  ThreadJoin(ThreadId executor, ThreadId target) : Transition(executor, std::nullopt), target_(target) {}

  std::string_view kind() const override { return "thread_join"; }
  std::optional<std::int64_t> payload() const override { return index_of(target_); }

  // An unknown target is let through so that executing it reports the misuse.
  bool enabled_in(const ModelState& s) const override {
    return !s.has_thread(target_) || s.thread(target_).exited;
  }
  bool dependent_with(const Transition&) const override { return false; }

  std::optional<Finding> check(const ModelState& pre) const override {
    if (!pre.has_thread(target_))
      return Finding{FindingKind::UsageError, "join on unknown thread " + std::to_string(index_of(target_))};
    if (target_ == executor()) return Finding{FindingKind::UsageError, "thread joins itself"};
    return std::nullopt;
  }
  std::optional<ThreadId> thread_target() const override { return target_; }

  ThreadId target() const noexcept { return target_; }

 private:
  ThreadId target_;
};

class ThreadExit final : public Transition {
 public:
  explicit ThreadExit(ThreadId executor) : Transition(executor, std::nullopt) {}

  std::string_view kind() const override { return "thread_exit"; }
  bool enabled_in(const ModelState&) const override { return true; }
  bool is_bookkeeping() const override { return true; }
  bool dependent_with(const Transition&) const override { return false; }

 protected:
  void apply(ModelState& s) const override {
    ThreadRecord& rec = s.thread(executor());
    rec.exited = true;
    rec.pending.reset();
  }
};

}  // namespace permute
