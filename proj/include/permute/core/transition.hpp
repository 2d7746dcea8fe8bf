#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "permute/core/ids.hpp"

namespace permute {

class ModelState;
class Transition;
using TransitionPtr = std::shared_ptr<const Transition>;

enum class FindingKind { Assertion, UsageError };

struct Finding {
  FindingKind kind;
  std::string message;
};

// Identity used by sleep sets: executor, operation tag and primary object.
struct TransitionKey {
  ThreadId executor;
  std::string kind;
  std::optional<ObjectId> object;

  auto operator<=>(const TransitionKey&) const = default;
};

// One visible operation by one thread. Subclasses declare the three DPOR
// attributes (enabled, dependent, co-enabled) and the action on the model.
//
// dependent_with/coenabled_with only describe this transition's own relations
// and may assume the other transition runs on a different thread and does not
// create or join this one; the framework in relations.hpp combines both sides.
class Transition {
 public:
  Transition(ThreadId executor, std::optional<ObjectId> object)
      : executor_(executor), object_(object) {}
  virtual ~Transition() = default;

  ThreadId executor() const noexcept { return executor_; }
  const std::optional<ObjectId>& object() const noexcept { return object_; }

  virtual std::string_view kind() const = 0;
  virtual std::optional<std::int64_t> payload() const { return std::nullopt; }

  // Attribute 1: must be provided.
  virtual bool enabled_in(const ModelState& state) const = 0;
  // Attribute 2: conservative default, everything is dependent.
  virtual bool dependent_with(const Transition&) const { return true; }
  // Attribute 3: default, everything is co-enabled.
  virtual bool coenabled_with(const Transition&) const { return true; }

  // Returns the successor model state; `state` is left untouched.
  ModelState apply_to(const ModelState& state) const;

  // Value delivered to the program when this transition is granted.
  virtual std::int64_t observe(const ModelState&) const { return 0; }
  // Finding raised by executing this transition from `pre`, if any.
  virtual std::optional<Finding> check(const ModelState&) const { return std::nullopt; }
  // Thread created or joined by this transition.
  virtual std::optional<ThreadId> thread_target() const { return std::nullopt; }
  // True when thread_target() names a thread this transition brings to life.
  virtual bool creates_thread() const { return false; }
  // Bookkeeping transitions (thread exit) are exempt from per-thread budgets
  // and are not counted as explored transitions.
  virtual bool is_bookkeeping() const { return false; }
  // Concrete form of this transition once executed from `pre`.
  virtual TransitionPtr resolve(const ModelState&, TransitionPtr self) const { return self; }

  TransitionKey key() const { return {executor_, std::string(kind()), object_}; }

  // Stable text form: "<kind> <object|-> <payload|->".
  virtual std::string label() const {
    std::string out(kind());
    out += ' ';
    out += object_ ? std::to_string(index_of(*object_)) : std::string("-");
    out += ' ';
    const auto p = payload();
    out += p ? std::to_string(*p) : std::string("-");
    return out;
  }

 protected:
  // Action: mutates the successor copy. Default does nothing.
  virtual void apply(ModelState&) const {}

 private:
  ThreadId executor_;
  std::optional<ObjectId> object_;
};

// Helper for relation overrides written with dynamic_cast, as in
// `if (auto* lock = as<MutexLock>(other)) ...`.
template <class T>
const T* as(const Transition& t) {
  return dynamic_cast<const T*>(&t);
}

}  // namespace permute
