#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permute/core/error.hpp"
#include "permute/primitives/policy.hpp"
#include "permute/primitives/rwlock.hpp"

namespace permute::scenario {

struct SourcePos {
  int line = 1;
  int col = 1;
};

class ScenarioError : public Error {
 public:
  ScenarioError(SourcePos pos, const std::string& what)
      : Error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + what), pos_(pos) {}
  SourcePos pos() const noexcept { return pos_; }

 private:
  SourcePos pos_;
};

enum class ExprOp { Int, Name, Neg, Not, Mul, Add, Sub, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

// Integer expression; comparisons and connectives yield 0 or 1.
struct Expr {
  ExprOp op = ExprOp::Int;
  std::int64_t value = 0;  // Int
  std::string name;        // Name
  std::vector<Expr> args;  // operands of unary/binary ops
  SourcePos pos;

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.op == b.op && a.value == b.value && a.name == b.name && a.args == b.args;
  }
};

enum class StmtKind { Op, Assign, Assert, If, While, Repeat };

struct Stmt {
  StmtKind kind = StmtKind::Op;
  std::string op;                 // lock, sem_wait, read, write, ...
  std::vector<std::string> args;  // object or variable operands
  std::string target;             // destination of an assignment, read or sem_getvalue
  Expr expr;                      // assigned/written value or condition
  std::optional<std::string> message;
  std::int64_t count = 0;  // repeat
  std::vector<Stmt> body;
  std::vector<Stmt> else_body;
  SourcePos pos;

  friend bool operator==(const Stmt& a, const Stmt& b) {
    return a.kind == b.kind && a.op == b.op && a.args == b.args && a.target == b.target && a.expr == b.expr &&
           a.message == b.message && a.count == b.count && a.body == b.body && a.else_body == b.else_body;
  }
};

struct Decl {
  std::string name;
  std::string kind;         // mutex, sem, cond, rwlock, rwwlock, barrier, var
  std::int64_t value = 0;   // sem initial count, barrier parties, var initial value
  std::optional<WakeupPolicy> policy;
  std::optional<std::uint32_t> spurious;
  RwPreference preference = RwPreference::Writer;
  SourcePos pos;

  friend bool operator==(const Decl& a, const Decl& b) {
    return a.name == b.name && a.kind == b.kind && a.value == b.value && a.policy == b.policy &&
           a.spurious == b.spurious && a.preference == b.preference;
  }
};

struct OptionSetting {
  std::string name;
  std::optional<std::int64_t> value;
  SourcePos pos;

  friend bool operator==(const OptionSetting& a, const OptionSetting& b) {
    return a.name == b.name && a.value == b.value;
  }
};

struct ThreadDef {
  std::string name;
  std::vector<Stmt> body;
  SourcePos pos;

  friend bool operator==(const ThreadDef& a, const ThreadDef& b) { return a.name == b.name && a.body == b.body; }
};

struct ScenarioProgram {
  std::vector<Decl> decls;
  std::vector<OptionSetting> options;
  std::vector<ThreadDef> threads;

  bool operator==(const ScenarioProgram&) const = default;

  const Decl* decl(std::string_view name) const {
    for (const auto& d : decls)
      if (d.name == name) return &d;
    return nullptr;
  }
  const OptionSetting* option(std::string_view name) const {
    for (const auto& o : options)
      if (o.name == name) return &o;
    return nullptr;
  }
};

}  // namespace permute::scenario
