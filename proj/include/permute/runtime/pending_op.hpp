#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "permute/core/error.hpp"
#include "permute/core/ids.hpp"
#include "permute/core/model_state.hpp"
#include "permute/primitives/policy.hpp"
#include "permute/primitives/rwlock.hpp"
#include "permute/primitives/variable.hpp"

namespace permute {

class LogicalThread;
using ThreadFactory = std::function<std::unique_ptr<LogicalThread>()>;

struct AssertionSpec {
  AssertCheck::Predicate predicate;
  std::string message;
  std::vector<std::string> reads;
};

// A visible-operation request as written by a program wrapper, before the
// checker turns it into transitions.
struct PendingOp {
  std::string kind;                  // "lock", "sem_wait", "cond_wait", ...
  std::vector<std::string> objects;  // named visible objects, in operand order
  std::string var;                   // shared variable for read/write
  std::int64_t value = 0;            // value to write
  std::optional<ThreadId> target;    // join target
  ThreadFactory spawn;               // body of a created thread
  std::optional<AssertionSpec> assertion;

  std::string describe() const {
    std::string out = kind;
    for (const auto& o : objects) out += " " + o;
    if (!var.empty()) out += " " + var;
    if (kind == "write") out += " " + std::to_string(value);
    if (target) out += " " + std::to_string(index_of(*target));
    return out;
  }
};

struct Exited {};
using StepResult = std::variant<PendingOp, Exited>;

// Raised by a thread body for a fault in its own computation (the crash
// analog); recorded as a finding of the current trace.
class ThreadFault : public Error {
 public:
  using Error::Error;
};

// A deterministic thread body. Between two resumes it performs only
// invisible computation, which may touch shared variables.
class LogicalThread {
 public:
  virtual ~LogicalThread() = default;

  // Runs up to the next visible operation. `result` is the value observed by
  // the previously granted operation (0 on the first resume).
  virtual StepResult resume(std::int64_t result, SharedVars& vars) = 0;

  // Copy of the body at its current point, when the body supports it.
  virtual std::unique_ptr<LogicalThread> clone() const { return nullptr; }

  // Bytes that fix everything the body will do from here on, given the same
  // results and shared variables. Lets tools recognise a configuration they
  // have already explored. Bodies that can't describe themselves return nullopt.
  virtual std::optional<std::string> snapshot() const { return std::nullopt; }
};

// Declaration of one visible object. Built-in kinds are "mutex", "sem",
// "cond", "rwlock", "rwwlock" and "barrier"; extensions register their own.
struct ObjectDecl {
  std::string name{};
  std::string kind{};
  std::int64_t value = 0;  // semaphore count or barrier parties
  std::optional<WakeupPolicy> policy{};
  std::optional<std::uint32_t> spurious{};
  RwPreference preference = RwPreference::Writer;
};

class Program {
 public:
  virtual ~Program() = default;

  virtual std::vector<ObjectDecl> objects() const = 0;
  virtual SharedVars initial_vars() const { return {}; }
  virtual std::unique_ptr<LogicalThread> make_main() const = 0;
};

}  // namespace permute
