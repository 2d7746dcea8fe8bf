#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "permute/core/model_state.hpp"
#include "permute/core/transition.hpp"

namespace permute {

// Annotated shared-memory access (the read/write visible operations).
class VarAccess : public Transition {
 public:
  VarAccess(ThreadId executor, std::string var) : Transition(executor, std::nullopt), var_(std::move(var)) {}

  const std::string& var() const noexcept { return var_; }
  virtual bool is_write() const = 0;

  std::string label() const override { return Transition::label() + " " + var_; }

  bool enabled_in(const ModelState&) const override { return true; }
  bool dependent_with(const Transition& other) const override;

 private:
  std::string var_;
};

class VarRead final : public VarAccess {
 public:
  using VarAccess::VarAccess;

  std::string_view kind() const override { return "read"; }
  bool is_write() const override { return false; }
  std::int64_t observe(const ModelState& pre) const override { return pre.var(var()); }
};

class VarWrite final : public VarAccess {
 public:
  VarWrite(ThreadId executor, std::string var, std::int64_t value)
      : VarAccess(executor, std::move(var)), value_(value) {}

  std::string_view kind() const override { return "write"; }
  std::optional<std::int64_t> payload() const override { return value_; }
  bool is_write() const override { return true; }

 protected:
  void apply(ModelState& s) const override { s.vars()[var()] = value_; }

 private:
  std::int64_t value_;
};

// Predicate over shared variables, evaluated when the transition executes.
class AssertCheck final : public Transition {
 public:
  using Predicate = std::function<bool(const SharedVars&)>;

  AssertCheck(ThreadId executor, Predicate predicate, std::string message, std::vector<std::string> reads)
      : Transition(executor, std::nullopt),
        predicate_(std::move(predicate)),
        message_(std::move(message)),
        reads_(std::move(reads)) {}

  std::string_view kind() const override { return "assert"; }
  std::string label() const override { return Transition::label() + " " + message_; }

  bool enabled_in(const ModelState&) const override { return true; }
  bool dependent_with(const Transition& other) const override {
    auto* w = as<VarWrite>(other);
    return w != nullptr && reads(w->var());
  }

  std::optional<Finding> check(const ModelState& pre) const override {
    if (predicate_(pre.vars())) return std::nullopt;
    return Finding{FindingKind::Assertion, message_};
  }

  const std::string& message() const noexcept { return message_; }
  bool reads(const std::string& var) const { return std::find(reads_.begin(), reads_.end(), var) != reads_.end(); }

 private:
  Predicate predicate_;
  std::string message_;
  std::vector<std::string> reads_;
};

inline bool VarAccess::dependent_with(const Transition& other) const {
  if (auto* a = as<VarAccess>(other)) return a->var() == var_ && (is_write() || a->is_write());
  if (auto* check = as<AssertCheck>(other)) return is_write() && check->reads(var_);
  return false;
}

}  // namespace permute
