#pragma once

#include <coroutine>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permute/runtime/pending_op.hpp"

namespace permute {

// Coroutine type for thread bodies written in C++. Each co_await on a
// HostContext operation suspends the body at a visible operation.
class HostTask {
 public:
  struct promise_type {
    std::exception_ptr error;

    HostTask get_return_object() { return HostTask{std::coroutine_handle<promise_type>::from_promise(*this)}; }
    std::suspend_always initial_suspend() noexcept { return {}; }
    std::suspend_always final_suspend() noexcept { return {}; }
    void return_void() noexcept {}
    void unhandled_exception() noexcept { error = std::current_exception(); }
  };

  HostTask() = default;
  explicit HostTask(std::coroutine_handle<promise_type> h) : handle_(h) {}
  HostTask(HostTask&& o) noexcept : handle_(std::exchange(o.handle_, {})) {}
  HostTask& operator=(HostTask&& o) noexcept {
    if (this != &o) {
      if (handle_) handle_.destroy();
      handle_ = std::exchange(o.handle_, {});
    }
    return *this;
  }
  HostTask(const HostTask&) = delete;
  HostTask& operator=(const HostTask&) = delete;
  ~HostTask() {
    if (handle_) handle_.destroy();
  }

  std::coroutine_handle<promise_type> handle() const noexcept { return handle_; }

 private:
  std::coroutine_handle<promise_type> handle_;
};

class HostContext;
using HostBody = std::function<HostTask(HostContext&)>;

// Handle a thread body uses to issue visible operations. Plain reads and
// writes of vars() are invisible; read()/write() are visible accesses.
//
// GCC 11 crashes on a braced-init-list written inside a co_await expression;
// build such arguments in a local first.
class HostContext {
 public:
  template <class Result>
  struct Op {
    HostContext* ctx;
    PendingOp op;

    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<>) { ctx->pending_ = std::move(op); }
    Result await_resume() const noexcept {
      if constexpr (std::is_same_v<Result, ThreadId>)
        return ThreadId{static_cast<std::uint32_t>(ctx->result_)};
      else
        return static_cast<Result>(ctx->result_);
    }
  };

  Op<std::int64_t> lock(std::string m) { return simple("lock", {std::move(m)}); }
  Op<std::int64_t> unlock(std::string m) { return simple("unlock", {std::move(m)}); }
  Op<std::int64_t> sem_wait(std::string s) { return simple("sem_wait", {std::move(s)}); }
  Op<std::int64_t> sem_post(std::string s) { return simple("sem_post", {std::move(s)}); }
  Op<std::int64_t> sem_getvalue(std::string s) { return simple("sem_getvalue", {std::move(s)}); }
  Op<std::int64_t> cond_wait(std::string c, std::string m) { return simple("cond_wait", {std::move(c), std::move(m)}); }
  Op<std::int64_t> cond_signal(std::string c) { return simple("cond_signal", {std::move(c)}); }
  Op<std::int64_t> cond_broadcast(std::string c) { return simple("cond_broadcast", {std::move(c)}); }
  Op<std::int64_t> rdlock(std::string l) { return simple("rdlock", {std::move(l)}); }
  Op<std::int64_t> wrlock(std::string l) { return simple("wrlock", {std::move(l)}); }
  Op<std::int64_t> wrlock1(std::string l) { return simple("wrlock1", {std::move(l)}); }
  Op<std::int64_t> wrlock2(std::string l) { return simple("wrlock2", {std::move(l)}); }
  Op<std::int64_t> rwunlock(std::string l) { return simple("rwunlock", {std::move(l)}); }
  Op<std::int64_t> barrier_wait(std::string b) { return simple("barrier_wait", {std::move(b)}); }

  Op<std::int64_t> read(std::string var) {
    PendingOp op;
    op.kind = "read";
    op.var = std::move(var);
    return {this, std::move(op)};
  }
  Op<std::int64_t> write(std::string var, std::int64_t value) {
    PendingOp op;
    op.kind = "write";
    op.var = std::move(var);
    op.value = value;
    return {this, std::move(op)};
  }
  Op<std::int64_t> check(AssertCheck::Predicate pred, std::string message, std::vector<std::string> reads = {}) {
    PendingOp op;
    op.kind = "assert";
    op.assertion = AssertionSpec{std::move(pred), std::move(message), std::move(reads)};
    return {this, std::move(op)};
  }
  Op<ThreadId> spawn(HostBody body);
  Op<std::int64_t> join(ThreadId t) {
    PendingOp op;
    op.kind = "join";
    op.target = t;
    return {this, std::move(op)};
  }

  // Any registered operation, for extension transitions.
  Op<std::int64_t> op(PendingOp op) { return {this, std::move(op)}; }

  SharedVars& vars() { return *vars_; }

 private:
  friend class HostThread;

  Op<std::int64_t> simple(const char* kind, std::vector<std::string> objects) {
    PendingOp op;
    op.kind = kind;
    op.objects = std::move(objects);
    return {this, std::move(op)};
  }

  std::optional<PendingOp> pending_;
  std::int64_t result_ = 0;
  SharedVars* vars_ = nullptr;
};

class HostThread final : public LogicalThread {
 public:
  explicit HostThread(HostBody body) : body_(std::move(body)) { task_ = body_(ctx_); }
  HostThread(const HostThread&) = delete;
  HostThread& operator=(const HostThread&) = delete;

  StepResult resume(std::int64_t result, SharedVars& vars) override {
    auto h = task_.handle();
    if (!h || h.done()) return Exited{};
    ctx_.result_ = result;
    ctx_.vars_ = &vars;
    ctx_.pending_.reset();
    h.resume();
    if (h.done()) {
      if (auto err = h.promise().error) std::rethrow_exception(err);
      return Exited{};
    }
    if (!ctx_.pending_) throw ThreadFault("thread body suspended outside a visible operation");
    return std::move(*ctx_.pending_);
  }

 private:
  HostBody body_;
  HostContext ctx_;
  HostTask task_;
};

inline HostContext::Op<ThreadId> HostContext::spawn(HostBody body) {
  PendingOp op;
    op.kind = "create";
  op.spawn = [body = std::move(body)]() -> std::unique_ptr<LogicalThread> { return std::make_unique<HostThread>(body); };
  return {this, std::move(op)};
}

// A program assembled from C++ coroutine bodies:
//
//   HostProgram p;
//   p.mutex("m").main([](HostContext& ctx) -> HostTask { co_await ctx.lock("m"); ... });
class HostProgram final : public Program {
 public:
  HostProgram& declare(ObjectDecl decl) {
    decls_.push_back(std::move(decl));
    return *this;
  }
  HostProgram& mutex(std::string name, std::optional<WakeupPolicy> policy = std::nullopt) {
    return declare({.name = std::move(name), .kind = "mutex", .policy = policy});
  }
  HostProgram& sem(std::string name, std::int64_t value, std::optional<WakeupPolicy> policy = std::nullopt) {
    return declare({.name = std::move(name), .kind = "sem", .value = value, .policy = policy});
  }
  HostProgram& cond(std::string name, std::optional<WakeupPolicy> policy = std::nullopt) {
    return declare({.name = std::move(name), .kind = "cond", .policy = policy});
  }
  HostProgram& rwlock(std::string name, RwPreference pref = RwPreference::Writer) {
    return declare({.name = std::move(name), .kind = "rwlock", .preference = pref});
  }
  HostProgram& rwwlock(std::string name) { return declare({.name = std::move(name), .kind = "rwwlock"}); }
  HostProgram& barrier(std::string name, std::int64_t parties) {
    return declare({.name = std::move(name), .kind = "barrier", .value = parties});
  }
  HostProgram& var(std::string name, std::int64_t init = 0) {
    vars_[std::move(name)] = init;
    return *this;
  }
  HostProgram& main(HostBody body) {
    main_ = std::move(body);
    return *this;
  }

  std::vector<ObjectDecl> objects() const override { return decls_; }
  SharedVars initial_vars() const override { return vars_; }
  std::unique_ptr<LogicalThread> make_main() const override {
    if (!main_) throw ConfigurationError("host program has no main body");
    return std::make_unique<HostThread>(main_);
  }

 private:
  std::vector<ObjectDecl> decls_;
  SharedVars vars_;
  HostBody main_;
};

}  // namespace permute
