#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "permute/core/error.hpp"
#include "permute/core/model_state.hpp"
#include "permute/primitives/barrier.hpp"
#include "permute/primitives/condvar.hpp"
#include "permute/primitives/mutex.hpp"
#include "permute/primitives/rwlock.hpp"
#include "permute/primitives/semaphore.hpp"
#include "permute/primitives/thread_ops.hpp"
#include "permute/primitives/variable.hpp"
#include "permute/runtime/pending_op.hpp"

namespace permute {

// Checker-wide object settings. Policy lookup goes: the object's own
// declaration, then an override for its kind, then the kind default.
struct ModelConfig {
  std::map<std::string, WakeupPolicy, std::less<>> policy_overrides;
  std::uint32_t max_spurious_wakeups = 0;

  WakeupPolicy policy_for(const ObjectDecl& decl) const {
    if (decl.policy) return *decl.policy;
    if (auto it = policy_overrides.find(decl.kind); it != policy_overrides.end()) return it->second;
    return decl.kind == "cond" ? WakeupPolicy::ArbitraryIndependentEnqueue : WakeupPolicy::ArbitraryNoEnqueue;
  }
};

struct BuildContext {
  ThreadId executor;
  const PendingOp& op;
  std::vector<ObjectId> objects;  // resolved ids of op.objects
  const ModelState& state;        // the named objects already exist here
  const ModelConfig& config;

  template <class T>
  const T& obj(std::size_t i) const {
    if (i >= objects.size()) throw ConfigurationError("operation '" + op.kind + "' is missing an object operand");
    if (const T* o = state.find<T>(objects[i])) return *o;
    throw ConfigurationError("operation '" + op.kind + "' cannot act on " + state.object(objects[i]).name() + " (a " +
                             std::string(state.object(objects[i]).kind()) + ")");
  }
};

// Maps a program operation to the transitions it executes, in order. Most
// operations are one transition; blocking waits split into an enqueue and a
// finish depending on the object's policy.
using OpHandler = std::function<std::vector<TransitionPtr>(const BuildContext&)>;
using ObjectFactory = std::function<std::shared_ptr<const VisibleObject>(const ObjectDecl&, const ModelConfig&)>;

class TransitionRegistry {
 public:
  void add_op(std::string kind, OpHandler handler) { ops_[std::move(kind)] = std::move(handler); }
  void add_object_kind(std::string kind, ObjectFactory factory) { objects_[std::move(kind)] = std::move(factory); }

  bool has_op(std::string_view kind) const { return ops_.find(kind) != ops_.end(); }
  bool has_object_kind(std::string_view kind) const { return objects_.find(kind) != objects_.end(); }

  std::vector<TransitionPtr> build(const BuildContext& ctx) const {
    auto it = ops_.find(ctx.op.kind);
    if (it == ops_.end()) throw ConfigurationError("no transition registered for operation '" + ctx.op.kind + "'");
    auto out = it->second(ctx);
    if (out.empty()) throw ConfigurationError("operation '" + ctx.op.kind + "' produced no transitions");
    return out;
  }

  std::shared_ptr<const VisibleObject> make_object(const ObjectDecl& decl, const ModelConfig& config) const {
    auto it = objects_.find(decl.kind);
    if (it == objects_.end()) throw ConfigurationError("unknown object kind '" + decl.kind + "'");
    return it->second(decl, config);
  }

  static TransitionRegistry with_builtins();

 private:
  std::map<std::string, OpHandler, std::less<>> ops_;
  std::map<std::string, ObjectFactory, std::less<>> objects_;
};

namespace detail {

template <class T, class... Args>
TransitionPtr make(Args&&... args) {
  return std::make_shared<const T>(std::forward<Args>(args)...);
}

template <int N>
std::vector<TransitionPtr> rw_acquire(const BuildContext& c, RwRole role) {
  auto preference = c.obj<RwObject<N>>(0).preference();
  return {make<RwEnqueue<N>>(c.executor, c.objects[0], role, preference),
          make<RwAcquire<N>>(c.executor, c.objects[0], role)};
}

// rdlock and rwunlock serve both lock kinds.
inline bool is_rww(const BuildContext& c) {
  if (c.objects.empty()) throw ConfigurationError("operation '" + c.op.kind + "' is missing an object operand");
  if (c.state.find<RWWLockObj>(c.objects[0])) return true;
  c.obj<RWLockObj>(0);
  return false;
}

}  // namespace detail

inline TransitionRegistry TransitionRegistry::with_builtins() {
  using detail::make;
  TransitionRegistry r;

  r.add_object_kind("mutex", [](const ObjectDecl& d, const ModelConfig& cfg) {
    return std::make_shared<const MutexObj>(d.name, cfg.policy_for(d));
  });
  r.add_object_kind("sem", [](const ObjectDecl& d, const ModelConfig& cfg) {
    return std::make_shared<const SemObj>(d.name, d.value, cfg.policy_for(d));
  });
  r.add_object_kind("cond", [](const ObjectDecl& d, const ModelConfig& cfg) {
    return std::make_shared<const CondObj>(d.name, cfg.policy_for(d), d.spurious.value_or(cfg.max_spurious_wakeups));
  });
  r.add_object_kind("rwlock", [](const ObjectDecl& d, const ModelConfig&) {
    return std::make_shared<const RWLockObj>(d.name, d.preference);
  });
  r.add_object_kind("rwwlock", [](const ObjectDecl& d, const ModelConfig&) {
    return std::make_shared<const RWWLockObj>(d.name, RwPreference::Writer);
  });
  r.add_object_kind("barrier", [](const ObjectDecl& d, const ModelConfig&) {
    if (d.value <= 0) throw ConfigurationError("barrier " + d.name + " needs a positive party count");
    return std::make_shared<const BarrierObj>(d.name, static_cast<std::uint32_t>(d.value));
  });

  r.add_op("lock", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    const auto& m = c.obj<MutexObj>(0);
    if (m.queued())
      return {make<MutexLockEnqueue>(c.executor, c.objects[0], m.policy()),
              make<MutexLock>(c.executor, c.objects[0], m.policy())};
    return {make<MutexLock>(c.executor, c.objects[0], m.policy())};
  });
  r.add_op("unlock", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    return {make<MutexUnlock>(c.executor, c.objects[0], c.obj<MutexObj>(0).policy())};
  });

  r.add_op("sem_wait", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    const auto p = c.obj<SemObj>(0).policy();
    if (p == WakeupPolicy::ArbitraryNoEnqueue) return {make<SemWait>(c.executor, c.objects[0], p)};
    return {make<SemEnqueue>(c.executor, c.objects[0], p), make<SemWaitFinish>(c.executor, c.objects[0], p)};
  });
  r.add_op("sem_post", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    return {make<SemPost>(c.executor, c.objects[0], c.obj<SemObj>(0).policy())};
  });
  r.add_op("sem_getvalue", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    return {make<SemGetValue>(c.executor, c.objects[0], c.obj<SemObj>(0).policy())};
  });

  r.add_op("cond_wait", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    const auto p = c.obj<CondObj>(0).policy();
    c.obj<MutexObj>(1);
    return {make<CondEnqueue>(c.executor, c.objects[0], c.objects[1], p),
            make<CondWake>(c.executor, c.objects[0], c.objects[1], p)};
  });
  r.add_op("cond_signal", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    return {make<CondSignal>(c.executor, c.objects[0], c.obj<CondObj>(0).policy())};
  });
  r.add_op("cond_broadcast", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    return {make<CondBroadcast>(c.executor, c.objects[0], c.obj<CondObj>(0).policy())};
  });

  r.add_op("rdlock", [](const BuildContext& c) {
    return detail::is_rww(c) ? detail::rw_acquire<2>(c, RwRole::Reader) : detail::rw_acquire<1>(c, RwRole::Reader);
  });
  r.add_op("wrlock", [](const BuildContext& c) {
    c.obj<RWLockObj>(0);
    return detail::rw_acquire<1>(c, RwRole::Writer1);
  });
  r.add_op("wrlock1", [](const BuildContext& c) {
    c.obj<RWWLockObj>(0);
    return detail::rw_acquire<2>(c, RwRole::Writer1);
  });
  r.add_op("wrlock2", [](const BuildContext& c) {
    c.obj<RWWLockObj>(0);
    return detail::rw_acquire<2>(c, RwRole::Writer2);
  });
  r.add_op("rwunlock", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    if (detail::is_rww(c)) return {make<RwUnlock<2>>(c.executor, c.objects[0])};
    return {make<RwUnlock<1>>(c.executor, c.objects[0])};
  });

  r.add_op("barrier_wait", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    c.obj<BarrierObj>(0);
    return {make<BarrierArrive>(c.executor, c.objects[0]), make<BarrierWaitFinish>(c.executor, c.objects[0])};
  });

  r.add_op("read", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    return {make<VarRead>(c.executor, c.op.var)};
  });
  r.add_op("write", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    return {make<VarWrite>(c.executor, c.op.var, c.op.value)};
  });
  r.add_op("assert", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    if (!c.op.assertion) throw ConfigurationError("assert operation without a predicate");
    const auto& a = *c.op.assertion;
    return {make<AssertCheck>(c.executor, a.predicate, a.message, a.reads)};
  });

  r.add_op("create", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    if (!c.op.spawn) throw ConfigurationError("create operation without a thread body");
    return {make<ThreadCreate>(c.executor)};
  });
  r.add_op("join", [](const BuildContext& c) -> std::vector<TransitionPtr> {
    if (!c.op.target) throw ConfigurationError("join operation without a target");
    return {make<ThreadJoin>(c.executor, *c.op.target)};
  });
  return r;
}

inline std::shared_ptr<const TransitionRegistry> builtin_registry() {
  static const auto registry = std::make_shared<const TransitionRegistry>(TransitionRegistry::with_builtins());
  return registry;
}

}  // namespace permute
