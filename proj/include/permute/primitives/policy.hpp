#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permute/core/ids.hpp"

namespace permute {

enum class WakeupPolicy {
  Fifo,
  Lifo,
  ArbitraryIndependentEnqueue,
  ArbitraryDependentEnqueue,
  ArbitraryNoEnqueue,  // enqueue fused into the wait transition
};

inline std::string_view to_string(WakeupPolicy p) {
  switch (p) {
    case WakeupPolicy::Fifo: return "fifo";
    case WakeupPolicy::Lifo: return "lifo";
    case WakeupPolicy::ArbitraryIndependentEnqueue: return "arb_indep";
    case WakeupPolicy::ArbitraryDependentEnqueue: return "arb_dep";
    case WakeupPolicy::ArbitraryNoEnqueue: return "arb_fused";
  }
  return "?";
}

inline std::optional<WakeupPolicy> parse_policy(std::string_view s) {
  for (auto p : {WakeupPolicy::Fifo, WakeupPolicy::Lifo, WakeupPolicy::ArbitraryIndependentEnqueue,
                 WakeupPolicy::ArbitraryDependentEnqueue, WakeupPolicy::ArbitraryNoEnqueue})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

inline bool is_arbitrary(WakeupPolicy p) {
  return p != WakeupPolicy::Fifo && p != WakeupPolicy::Lifo;
}

// Enqueue-enqueue dependence on one object.
inline bool enqueues_conflict(WakeupPolicy p) { return p != WakeupPolicy::ArbitraryIndependentEnqueue; }

// Ordered waiters of one object. Fifo and lifo keep arrival order; arbitrary
// policies keep a sorted set so that enqueues commute.
class WaitQueue {
 public:
  explicit WaitQueue(WakeupPolicy policy = WakeupPolicy::ArbitraryNoEnqueue) : policy_(policy) {}

  WakeupPolicy policy() const noexcept { return policy_; }
  const std::vector<ThreadId>& threads() const noexcept { return threads_; }
  bool empty() const noexcept { return threads_.empty(); }
  std::size_t size() const noexcept { return threads_.size(); }

  bool contains(ThreadId t) const { return std::find(threads_.begin(), threads_.end(), t) != threads_.end(); }

  void add(ThreadId t) {
    if (contains(t)) return;
    if (is_arbitrary(policy_))
      threads_.insert(std::upper_bound(threads_.begin(), threads_.end(), t), t);
    else
      threads_.push_back(t);
  }

  void remove(ThreadId t) { std::erase(threads_, t); }

  // The waiter the policy lets through next; any member under arbitrary.
  bool eligible(ThreadId t) const {
    if (threads_.empty()) return false;
    switch (policy_) {
      case WakeupPolicy::Fifo: return threads_.front() == t;
      case WakeupPolicy::Lifo: return threads_.back() == t;
      default: return contains(t);
    }
  }

 private:
  WakeupPolicy policy_;
  std::vector<ThreadId> threads_;
};

inline std::string describe(const WaitQueue& q) {
  std::string out = "[";
  for (std::size_t i = 0; i < q.threads().size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(index_of(q.threads()[i]));
  }
  return out + "]";
}

}  // namespace permute
