#pragma once

#include <cstdint>
#include <string>

#include "permute/dpor/report.hpp"

namespace permute::cli {

// Stable `key: value` lines; keys and their order never change.
inline std::string render_report(const ExplorationReport& r, std::uint64_t elapsed_ms) {
  std::string out;
  auto line = [&](const char* key, const std::string& value) { out += std::string(key) + ": " + value + "\n"; };
  line("transitions", std::to_string(r.total_transitions));
  line("traces", std::to_string(r.traces));
  line("deadlocks", std::to_string(r.deadlocks));
  line("first_deadlock_trace", r.first_deadlock_trace ? std::to_string(*r.first_deadlock_trace) : "none");
  line("assertion_failures", std::to_string(r.assertion_failures.size()));
  line("data_races", std::to_string(r.data_races.size()));
  line("budget_exhausted_traces", std::to_string(r.budget_exhausted_traces));
  line("faults", std::to_string(r.faults.size()));
  line("elapsed_ms", std::to_string(elapsed_ms));
  return out;
}

inline std::string render_findings(const ExplorationReport& r) {
  if (!r.has_findings()) return "";
  std::string out = "\nfindings:\n";
  if (r.first_deadlock_trace)
    out += "  deadlock: " + std::to_string(r.deadlocks) + " trace(s), first in trace " +
           std::to_string(*r.first_deadlock_trace) + "\n";
  for (const auto& a : r.assertion_failures)
    out += "  assertion failed in trace " + std::to_string(a.trace) + ": " + a.message + "\n";
  for (const auto& d : r.data_races)
    out += "  data race on " + d.var + " (" + d.kinds + ") between threads " + std::to_string(index_of(d.first)) +
           " and " + std::to_string(index_of(d.second)) + " in trace " + std::to_string(d.trace) + "\n";
  for (const auto& f : r.faults) out += "  fault in trace " + std::to_string(f.trace) + ": " + f.message + "\n";
  return out;
}

}  // namespace permute::cli
