#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permute/core/fingerprint.hpp"
#include "permute/core/ids.hpp"
#include "permute/runtime/registry.hpp"
#include "permute/runtime/schedule.hpp"

namespace permute {

struct ExplorationConfig {
  Budget max_depth_per_thread;  // unlimited when empty
  bool stop_at_first_deadlock = false;
  bool stop_at_first_failure = false;
  bool sleep_sets = true;
  bool keep_all_traces = false;
  ModelConfig model;  // wakeup policies and spurious-wakeup bound
};

enum class Verdict { Live, Completed, Deadlock, BudgetExhausted, AssertionFailure, Fault };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Live: return "live";
    case Verdict::Completed: return "completed";
    case Verdict::Deadlock: return "deadlock";
    case Verdict::BudgetExhausted: return "budget_exhausted";
    case Verdict::AssertionFailure: return "assertion_failure";
    case Verdict::Fault: return "fault";
  }
  return "?";
}

inline std::optional<Verdict> parse_verdict(std::string_view s) {
  for (auto v : {Verdict::Live, Verdict::Completed, Verdict::Deadlock, Verdict::BudgetExhausted,
                 Verdict::AssertionFailure, Verdict::Fault})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

struct AssertionFailure {
  std::uint64_t trace;
  std::string message;
};

struct DataRace {
  std::string var;
  ThreadId first;
  ThreadId second;
  std::uint64_t trace;
  std::string kinds;  // "read/write" or "write/write"
};

// Usage errors (unlock by non-owner, wait without the mutex) and thread
// crashes.
struct Fault {
  std::uint64_t trace;
  std::string message;
};

struct ExplorationReport {
  std::uint64_t total_transitions = 0;
  std::uint64_t traces = 0;
  std::uint64_t deadlocks = 0;
  std::optional<std::uint64_t> first_deadlock_trace;
  std::vector<AssertionFailure> assertion_failures;
  std::vector<DataRace> data_races;
  std::uint64_t budget_exhausted_traces = 0;
  std::vector<Fault> faults;
  std::uint64_t sleep_blocked = 0;  // branches cut because every enabled thread slept

  bool has_findings() const {
    return deadlocks > 0 || !assertion_failures.empty() || !data_races.empty() || !faults.empty();
  }
};

// A finished trace, handed to the trace sink.
struct TraceRecord {
  std::uint64_t index;
  Verdict verdict;
  Schedule schedule;
  Digest final_fingerprint;
  std::string message;
  bool has_race = false;
};

using TraceSink = std::function<void(const TraceRecord&)>;

}  // namespace permute
