#pragma once

#include "permute/core/transition.hpp"

namespace permute {

// Framework dependence: same-thread pairs and create/join edges are always
// dependent; otherwise either side may claim dependence. Symmetric.
inline bool dependent(const Transition& a, const Transition& b) {
  if (a.executor() == b.executor()) return true;
  if (auto target = a.thread_target(); target && *target == b.executor()) return true;
  if (auto target = b.thread_target(); target && *target == a.executor()) return true;
  return a.dependent_with(b) || b.dependent_with(a);
}

// Framework co-enabledness: either side may veto. A thread has one next
// transition, does not exist before its creation, and cannot run once a join
// on it is enabled. Symmetric.
inline bool coenabled(const Transition& a, const Transition& b) {
  if (a.executor() == b.executor()) return false;
  if (auto target = a.thread_target(); target && *target == b.executor()) return false;
  if (auto target = b.thread_target(); target && *target == a.executor()) return false;
  return a.coenabled_with(b) && b.coenabled_with(a);
}

}  // namespace permute
