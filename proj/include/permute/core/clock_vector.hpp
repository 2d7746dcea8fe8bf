#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "permute/core/error.hpp"
#include "permute/core/ids.hpp"
#include "permute/core/relations.hpp"
#include "permute/core/transition.hpp"

namespace permute {

// Happens-before timestamp: thread -> 1-based trace step index, 0 when the
// thread contributes nothing.
class ClockVector {
 public:
  std::uint32_t operator[](ThreadId t) const noexcept {
    const auto i = index_of(t);
    return i < entries_.size() ? entries_[i] : 0;
  }

  void set(ThreadId t, std::uint32_t step) {
    const auto i = index_of(t);
    if (i >= entries_.size()) entries_.resize(i + 1, 0);
    entries_[i] = step;
  }

  void merge(const ClockVector& other) {
    if (other.entries_.size() > entries_.size()) entries_.resize(other.entries_.size(), 0);
    for (std::size_t i = 0; i < other.entries_.size(); ++i) entries_[i] = std::max(entries_[i], other.entries_[i]);
  }

  std::size_t width() const noexcept { return entries_.size(); }

  friend bool operator==(const ClockVector& a, const ClockVector& b) {
    const auto n = std::max(a.entries_.size(), b.entries_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const ThreadId t{static_cast<std::uint32_t>(i)};
      if (a[t] != b[t]) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint32_t> entries_;
};

inline ClockVector max(ClockVector a, const ClockVector& b) {
  a.merge(b);
  return a;
}

// Executed trace with per-step and per-thread clock vectors. Step k by thread
// p gets max(clock(p), clocks of earlier steps dependent with k), entry[p] = k.
// A created thread inherits its creator's clock at the creation step.
class CausalHistory {
 public:
  std::size_t size() const noexcept { return steps_.size(); }

  // 1-based access.
  const Transition& step(std::size_t i) const { return *steps_.at(checked(i)); }
  const TransitionPtr& step_ptr(std::size_t i) const { return steps_.at(checked(i)); }
  const ClockVector& clock_of_step(std::size_t i) const { return clocks_.at(checked(i)); }

  const ClockVector& clock_of_thread(ThreadId t) const {
    static const ClockVector kEmpty;
    const auto i = index_of(t);
    return i < thread_clocks_.size() ? thread_clocks_[i] : kEmpty;
  }

  // Step i lies in the causal past of thread t's next transition.
  bool happens_before(std::size_t i, ThreadId t) const {
    return i <= clock_of_thread(t)[step(i).executor()];
  }

  void push(TransitionPtr executed) {
    const std::uint32_t k = static_cast<std::uint32_t>(steps_.size() + 1);
    const ThreadId p = executed->executor();
    ClockVector c = clock_of_thread(p);
    for (std::size_t i = 0; i < steps_.size(); ++i)
      if (dependent(*steps_[i], *executed)) c.merge(clocks_[i]);
    c.set(p, k);
    steps_.push_back(std::move(executed));
    clocks_.push_back(c);
    note_thread_clock(steps_.back(), c);
  }

  void truncate(std::size_t n) {
    if (n >= steps_.size()) return;
    steps_.resize(n);
    clocks_.resize(n);
    thread_clocks_.clear();
    for (std::size_t i = 0; i < n; ++i) note_thread_clock(steps_[i], clocks_[i]);
  }

 private:
  std::size_t checked(std::size_t i) const {
    if (i == 0 || i > steps_.size()) throw InvariantViolation("trace step index out of range");
    return i - 1;
  }

  ClockVector& thread_clock(ThreadId t) {
    const auto i = index_of(t);
    if (i >= thread_clocks_.size()) thread_clocks_.resize(i + 1);
    return thread_clocks_[i];
  }

  void note_thread_clock(const TransitionPtr& t, const ClockVector& c) {
    thread_clock(t->executor()) = c;
    if (!t->creates_thread()) return;
    if (auto child = t->thread_target()) thread_clock(*child).merge(c);
  }

  std::vector<TransitionPtr> steps_;
  std::vector<ClockVector> clocks_;
  std::vector<ClockVector> thread_clocks_;
};

}  // namespace permute
