#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permute/core/ids.hpp"
#include "permute/core/model_state.hpp"
#include "permute/primitives/variable.hpp"

namespace permute {

// One executed step of a trace. `label` is the pending transition's label
// before execution and is empty for steps read back from a trace file.
struct ScheduleStep {
  ThreadId thread{};
  std::string kind;
  std::string subject;  // object name, variable name, or "-"
  std::optional<std::int64_t> payload;
  std::string label;

  bool operator==(const ScheduleStep&) const = default;
};

using Schedule = std::vector<ScheduleStep>;

inline std::string subject_of(const Transition& t, const ModelState& state) {
  if (t.object() && state.has_object(*t.object())) return state.object(*t.object()).name();
  if (auto* v = as<VarAccess>(t)) return v->var();
  return "-";
}

}  // namespace permute
