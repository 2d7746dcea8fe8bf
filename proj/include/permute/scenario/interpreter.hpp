#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "permute/dpor/report.hpp"
#include "permute/runtime/pending_op.hpp"
#include "permute/scenario/ast.hpp"

namespace permute::scenario {

using Locals = std::map<std::string, std::int64_t, std::less<>>;

// Declared variables resolve to shared state, anything else to the thread's
// locals. Unassigned names read as 0.
inline std::int64_t eval(const Expr& e, const Locals& locals, const SharedVars& shared,
                         const std::set<std::string, std::less<>>& shared_names) {
  auto arg = [&](std::size_t i) { return eval(e.args[i], locals, shared, shared_names); };
  switch (e.op) {
    case ExprOp::Int: return e.value;
    case ExprOp::Name: {
      if (shared_names.contains(e.name)) {
        auto it = shared.find(e.name);
        return it == shared.end() ? 0 : it->second;
      }
      auto it = locals.find(e.name);
      return it == locals.end() ? 0 : it->second;
    }
    case ExprOp::Neg: return -arg(0);
    case ExprOp::Not: return arg(0) == 0;
    case ExprOp::Mul: return arg(0) * arg(1);
    case ExprOp::Add: return arg(0) + arg(1);
    case ExprOp::Sub: return arg(0) - arg(1);
    case ExprOp::Lt: return arg(0) < arg(1);
    case ExprOp::Le: return arg(0) <= arg(1);
    case ExprOp::Gt: return arg(0) > arg(1);
    case ExprOp::Ge: return arg(0) >= arg(1);
    case ExprOp::Eq: return arg(0) == arg(1);
    case ExprOp::Ne: return arg(0) != arg(1);
    case ExprOp::And: return arg(0) != 0 && arg(1) != 0;
    case ExprOp::Or: return arg(0) != 0 || arg(1) != 0;
  }
  return 0;
}

inline void shared_reads(const Expr& e, const std::set<std::string, std::less<>>& shared_names,
                         std::vector<std::string>& out) {
  if (e.op == ExprOp::Name && shared_names.contains(e.name) &&
      std::find(out.begin(), out.end(), e.name) == out.end())
    out.push_back(e.name);
  for (const auto& a : e.args) shared_reads(a, shared_names, out);
}

// Immutable data shared by every thread of one instantiated scenario.
struct ScenarioImage {
  ScenarioProgram program;
  std::set<std::string, std::less<>> shared_names;
};

// Interprets one statement block. Control flow lives on an explicit frame
// stack so the thread can be copied mid-execution.
class ScriptThread final : public LogicalThread {
 public:
  static constexpr std::uint64_t kInvisibleStepLimit = 100000;

  ScriptThread(std::shared_ptr<const ScenarioImage> image, const std::vector<Stmt>* body) : image_(std::move(image)) {
    frames_.push_back(Frame{body, 0, nullptr, 0});
  }

  StepResult resume(std::int64_t result, SharedVars& vars) override {
    if (!assign_to_.empty()) {
      store(assign_to_, result, vars);
      assign_to_.clear();
    }
    for (std::uint64_t n = 0; n < kInvisibleStepLimit; ++n) {
      if (frames_.empty()) return Exited{};
      Frame& f = frames_.back();
      if (f.pc >= f.block->size()) {
        if (f.loop && f.loop->kind == StmtKind::While && truthy(f.loop->expr, vars)) {
          f.pc = 0;
        } else if (f.loop && f.loop->kind == StmtKind::Repeat && --f.remaining > 0) {
          f.pc = 0;
        } else {
          frames_.pop_back();
        }
        continue;
      }
      const Stmt& s = (*f.block)[f.pc++];
      switch (s.kind) {
        case StmtKind::Assign: store(s.target, value(s.expr, vars), vars); break;
        case StmtKind::If:
          if (truthy(s.expr, vars)) {
            if (!s.body.empty()) frames_.push_back(Frame{&s.body, 0, nullptr, 0});
          } else if (!s.else_body.empty()) {
            frames_.push_back(Frame{&s.else_body, 0, nullptr, 0});
          }
          break;
        case StmtKind::While:
          if (truthy(s.expr, vars)) frames_.push_back(Frame{&s.body, 0, &s, 0});
          break;
        case StmtKind::Repeat:
          if (s.count > 0) frames_.push_back(Frame{&s.body, 0, &s, s.count});
          break;
        case StmtKind::Assert: return assertion(s);
        case StmtKind::Op: return operation(s, vars);
      }
    }
    throw ThreadFault("no visible operation within " + std::to_string(kInvisibleStepLimit) + " statements");
  }

  std::unique_ptr<LogicalThread> clone() const override { return std::make_unique<ScriptThread>(*this); }

  // Statement addresses are stable for the life of the image, which is all a
  // snapshot is compared within.
  std::optional<std::string> snapshot() const override {
    std::string out;
    wire::put(out, static_cast<std::uint64_t>(frames_.size()));
    for (const auto& f : frames_) {
      wire::put(out, reinterpret_cast<std::uintptr_t>(f.block));
      wire::put(out, static_cast<std::uint64_t>(f.pc));
      wire::put(out, reinterpret_cast<std::uintptr_t>(f.loop));
      wire::put_signed(out, f.remaining);
    }
    wire::put(out, static_cast<std::uint64_t>(locals_.size()));
    for (const auto& [name, v] : locals_) {
      wire::put(out, name);
      wire::put_signed(out, v);
    }
    wire::put(out, assign_to_);
    return out;
  }

  const Locals& locals() const noexcept { return locals_; }

 private:
  struct Frame {
    const std::vector<Stmt>* block;
    std::size_t pc;
    const Stmt* loop;  // while/repeat statement owning this block
    std::int64_t remaining;
  };

  std::int64_t value(const Expr& e, const SharedVars& vars) const { return eval(e, locals_, vars, image_->shared_names); }
  bool truthy(const Expr& e, const SharedVars& vars) const { return value(e, vars) != 0; }

  void store(const std::string& name, std::int64_t v, SharedVars& vars) {
    if (image_->shared_names.contains(name))
      vars[name] = v;
    else
      locals_[name] = v;
  }

  StepResult assertion(const Stmt& s) {
    PendingOp op;
    op.kind = "assert";
    std::vector<std::string> reads;
    shared_reads(s.expr, image_->shared_names, reads);
    auto pred = [image = image_, expr = &s.expr, locals = locals_](const SharedVars& vars) {
      return eval(*expr, locals, vars, image->shared_names) != 0;
    };
    op.assertion = AssertionSpec{std::move(pred), s.message.value_or("assertion failed"), std::move(reads)};
    return op;
  }

  StepResult operation(const Stmt& s, const SharedVars& vars) {
    PendingOp op;
    op.kind = s.op;
    if (s.op == "read" || s.op == "write") {
      op.var = s.args[0];
      if (s.op == "write") op.value = value(s.expr, vars);
    } else {
      op.objects = s.args;
    }
    assign_to_ = s.target;
    return op;
  }

  std::shared_ptr<const ScenarioImage> image_;
  std::vector<Frame> frames_;
  Locals locals_;
  std::string assign_to_;
};

// Implicit main: create every declared thread in order, then join them
// unless the scenario sets `option nojoin`.
class ScenarioMain final : public LogicalThread {
 public:
  explicit ScenarioMain(std::shared_ptr<const ScenarioImage> image) : image_(std::move(image)) {}

  StepResult resume(std::int64_t result, SharedVars&) override {
    const auto& threads = image_->program.threads;
    if (creating_) children_.push_back(ThreadId{static_cast<std::uint32_t>(result)});
    creating_ = next_ < threads.size();
    if (creating_) {
      PendingOp op;
      op.kind = "create";
      op.spawn = [image = image_, body = &threads[next_].body]() -> std::unique_ptr<LogicalThread> {
        return std::make_unique<ScriptThread>(image, body);
      };
      ++next_;
      return op;
    }
    const bool join = image_->program.option("nojoin") == nullptr;
    if (join && joined_ < children_.size()) {
      PendingOp op;
      op.kind = "join";
      op.target = children_[joined_++];
      return op;
    }
    return Exited{};
  }

  std::unique_ptr<LogicalThread> clone() const override { return std::make_unique<ScenarioMain>(*this); }

  std::optional<std::string> snapshot() const override {
    std::string out;
    wire::put(out, static_cast<std::uint64_t>(next_));
    wire::put(out, static_cast<std::uint64_t>(joined_));
    wire::put(out, static_cast<std::uint64_t>(creating_));
    for (ThreadId c : children_) wire::put(out, static_cast<std::uint64_t>(index_of(c)));
    return out;
  }

 private:
  std::shared_ptr<const ScenarioImage> image_;
  std::size_t next_ = 0;
  std::size_t joined_ = 0;
  bool creating_ = false;  // the last operation was a create
  std::vector<ThreadId> children_;
};

class ScenarioModel final : public Program {
 public:
  explicit ScenarioModel(ScenarioProgram program) {
    auto image = std::make_shared<ScenarioImage>();
    for (const auto& d : program.decls)
      if (d.kind == "var") image->shared_names.insert(d.name);
    image->program = std::move(program);
    image_ = std::move(image);
  }

  const ScenarioProgram& program() const noexcept { return image_->program; }

  std::vector<ObjectDecl> objects() const override {
    std::vector<ObjectDecl> out;
    for (const auto& d : image_->program.decls) {
      if (d.kind == "var") continue;
      ObjectDecl o;
      o.name = d.name;
      o.kind = d.kind;
      o.value = d.value;
      o.policy = d.policy;
      o.spurious = d.spurious;
      o.preference = d.preference;
      out.push_back(std::move(o));
    }
    return out;
  }

  SharedVars initial_vars() const override {
    SharedVars vars;
    for (const auto& d : image_->program.decls)
      if (d.kind == "var") vars[d.name] = d.value;
    return vars;
  }

  std::unique_ptr<LogicalThread> make_main() const override { return std::make_unique<ScenarioMain>(image_); }

 private:
  std::shared_ptr<const ScenarioImage> image_;
};

inline std::shared_ptr<const ScenarioModel> instantiate(ScenarioProgram program) {
  return std::make_shared<const ScenarioModel>(std::move(program));
}

// Applies the file's `option` lines to `config`.
inline void apply_options(const ScenarioProgram& p, ExplorationConfig& config) {
  for (const auto& o : p.options) {
    if (o.name == "max_thread_depth") {
      if (!o.value || *o.value < 1) throw ScenarioError(o.pos, "max_thread_depth must be at least 1");
      config.max_depth_per_thread = static_cast<std::uint32_t>(*o.value);
    } else if (o.name == "max_spurious_wakeups") {
      if (!o.value || *o.value < 0) throw ScenarioError(o.pos, "max_spurious_wakeups must be non-negative");
      config.model.max_spurious_wakeups = static_cast<std::uint32_t>(*o.value);
    } else if (o.name == "first_deadlock") {
      config.stop_at_first_deadlock = true;
    } else if (o.name == "stop_at_first_failure") {
      config.stop_at_first_failure = true;
    } else if (o.name == "no_sleep_sets") {
      config.sleep_sets = false;
    }
  }
}

}  // namespace permute::scenario
