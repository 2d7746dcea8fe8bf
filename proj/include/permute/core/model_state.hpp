#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permute/core/error.hpp"
#include "permute/core/ids.hpp"
#include "permute/core/transition.hpp"
#include "permute/core/visible_object.hpp"

namespace permute {

using SharedVars = std::map<std::string, std::int64_t, std::less<>>;

struct ThreadRecord {
  bool exited = false;
  TransitionPtr pending;
  std::uint32_t executed = 0;
};

// Snapshot of the program as the checker sees it: visible objects, per-thread
// status with the next transition, and shared variables. Copies share object
// storage; edit<T>() clones the one object being changed.
class ModelState {
 public:
  bool has_object(ObjectId id) const { return objects_.contains(id); }

  const VisibleObject& object(ObjectId id) const {
    auto it = objects_.find(id);
    if (it == objects_.end()) throw InvariantViolation("unknown object " + std::to_string(index_of(id)));
    return *it->second;
  }

  template <class T>
  const T* find(ObjectId id) const {
    auto it = objects_.find(id);
    return it == objects_.end() ? nullptr : dynamic_cast<const T*>(it->second.get());
  }

  template <class T>
  const T& get(ObjectId id) const {
    if (const T* obj = find<T>(id)) return *obj;
    throw InvariantViolation("object " + std::to_string(index_of(id)) + " has unexpected kind");
  }

  template <class T>
  T& edit(ObjectId id) {
    auto it = objects_.find(id);
    if (it == objects_.end()) throw InvariantViolation("edit of unknown object");
    auto copy = it->second->clone();
    T* typed = dynamic_cast<T*>(copy.get());
    if (typed == nullptr) throw InvariantViolation("object " + it->second->name() + " has unexpected kind");
    it->second = std::move(copy);
    return *typed;
  }

  void add_object(ObjectId id, std::shared_ptr<const VisibleObject> obj) { objects_.emplace(id, std::move(obj)); }

  const std::map<ObjectId, std::shared_ptr<const VisibleObject>>& objects() const noexcept { return objects_; }

  std::optional<ObjectId> object_named(std::string_view name) const {
    for (const auto& [id, obj] : objects_)
      if (obj->name() == name) return id;
    return std::nullopt;
  }

  std::size_t thread_count() const noexcept { return threads_.size(); }
  bool has_thread(ThreadId t) const noexcept { return index_of(t) < threads_.size(); }
  const ThreadRecord& thread(ThreadId t) const { return threads_.at(index_of(t)); }
  ThreadRecord& thread(ThreadId t) { return threads_.at(index_of(t)); }

  ThreadId add_thread() {
    threads_.emplace_back();
    return ThreadId{static_cast<std::uint32_t>(threads_.size() - 1)};
  }

  SharedVars& vars() noexcept { return vars_; }
  const SharedVars& vars() const noexcept { return vars_; }

  std::int64_t var(std::string_view name) const {
    auto it = vars_.find(name);
    return it == vars_.end() ? 0 : it->second;
  }

  std::uint32_t spurious_used(ObjectId cond) const {
    auto it = spurious_used_.find(cond);
    return it == spurious_used_.end() ? 0 : it->second;
  }
  void note_spurious(ObjectId cond) { ++spurious_used_[cond]; }
  const std::map<ObjectId, std::uint32_t>& spurious_counts() const noexcept { return spurious_used_; }

 private:
  std::map<ObjectId, std::shared_ptr<const VisibleObject>> objects_;
  std::vector<ThreadRecord> threads_;
  SharedVars vars_;
  std::map<ObjectId, std::uint32_t> spurious_used_;
};

inline ModelState Transition::apply_to(const ModelState& state) const {
  ModelState next = state;
  apply(next);
  return next;
}

// Applies `t` and charges it to its executor's transition count.
inline ModelState perform(const ModelState& state, const Transition& t) {
  ModelState next = t.apply_to(state);
  ++next.thread(t.executor()).executed;
  return next;
}

using Budget = std::optional<std::uint32_t>;

// The thread has used its budget and its next transition is a real one.
inline bool budget_spent(const ThreadRecord& rec, Budget budget) {
  return budget && rec.executed >= *budget && !(rec.pending && rec.pending->is_bookkeeping());
}

// A live thread whose pending transition can complete and which still has
// budget left.
inline bool thread_enabled(const ModelState& state, ThreadId t, Budget budget = std::nullopt) {
  const ThreadRecord& rec = state.thread(t);
  return !rec.exited && rec.pending && !budget_spent(rec, budget) && rec.pending->enabled_in(state);
}

inline std::vector<ThreadId> enabled_threads(const ModelState& state, Budget budget = std::nullopt) {
  std::vector<ThreadId> out;
  for (std::uint32_t i = 0; i < state.thread_count(); ++i)
    if (thread_enabled(state, ThreadId{i}, budget)) out.push_back(ThreadId{i});
  return out;
}

}  // namespace permute
