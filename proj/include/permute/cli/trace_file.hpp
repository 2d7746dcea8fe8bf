#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "permute/core/error.hpp"
#include "permute/core/fingerprint.hpp"
#include "permute/dpor/report.hpp"
#include "permute/version.hpp"

namespace permute::cli {

class TraceFormatError : public Error {
 public:
  using Error::Error;
};

// One persisted trace. Layout, one record per line:
//
//   permute-trace 1
//   tool permute <version>
//   scenario <path>
//   scenario_sha256 <hex>
//   config <key>=<value> ...
//   trace <index>
//   step <k> thread <t> <label> <object> <payload>
//   ...
//   verdict <verdict>
//   message <text>
//   fingerprint <hex>
struct TraceFile {
  std::string tool_version = kVersion;
  std::string scenario_path;
  std::string scenario_digest;
  ExplorationConfig config;
  std::uint64_t index = 0;
  Schedule steps;
  Verdict verdict = Verdict::Completed;
  std::string message;
  std::string fingerprint;  // lowercase hex
};

inline std::string config_line(const ExplorationConfig& c) {
  std::string out = "config";
  out += " max_thread_depth=" + (c.max_depth_per_thread ? std::to_string(*c.max_depth_per_thread) : "unlimited");
  out += " first_deadlock=" + std::to_string(c.stop_at_first_deadlock);
  out += " stop_at_first_failure=" + std::to_string(c.stop_at_first_failure);
  out += " sleep_sets=" + std::to_string(c.sleep_sets);
  out += " keep_all_traces=" + std::to_string(c.keep_all_traces);
  out += " max_spurious_wakeups=" + std::to_string(c.model.max_spurious_wakeups);
  std::string policies;
  for (const auto& [kind, p] : c.model.policy_overrides)
    policies += (policies.empty() ? "" : ",") + kind + ":" + std::string(to_string(p));
  out += " policies=" + (policies.empty() ? std::string("-") : policies);
  return out;
}

inline std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

inline std::string write_trace(const TraceFile& t) {
  std::string out = "permute-trace 1\n";
  out += "tool permute " + t.tool_version + "\n";
  out += "scenario " + t.scenario_path + "\n";
  out += "scenario_sha256 " + t.scenario_digest + "\n";
  out += config_line(t.config) + "\n";
  out += "trace " + std::to_string(t.index) + "\n";
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const auto& s = t.steps[k];
    out += "step " + std::to_string(k + 1) + " thread " + std::to_string(index_of(s.thread)) + " " + s.kind + " " +
           s.subject + " " + (s.payload ? std::to_string(*s.payload) : "-") + "\n";
  }
  out += "verdict " + std::string(to_string(t.verdict)) + "\n";
  out += "message " + one_line(t.message) + "\n";
  out += "fingerprint " + t.fingerprint + "\n";
  return out;
}

namespace detail {

inline std::uint64_t to_u64(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw TraceFormatError("line " + std::to_string(line) + ": expected a number, found '" + s + "'");
  }
}

inline void parse_config(const std::string& rest, ExplorationConfig& c, std::size_t line) {
  std::istringstream in(rest);
  std::string item;
  while (in >> item) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw TraceFormatError("line " + std::to_string(line) + ": bad config item " + item);
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "max_thread_depth") {
      if (value != "unlimited") c.max_depth_per_thread = static_cast<std::uint32_t>(to_u64(value, line));
    } else if (key == "first_deadlock") {
      c.stop_at_first_deadlock = value == "1";
    } else if (key == "stop_at_first_failure") {
      c.stop_at_first_failure = value == "1";
    } else if (key == "sleep_sets") {
      c.sleep_sets = value == "1";
    } else if (key == "keep_all_traces") {
      c.keep_all_traces = value == "1";
    } else if (key == "max_spurious_wakeups") {
      c.model.max_spurious_wakeups = static_cast<std::uint32_t>(to_u64(value, line));
    } else if (key == "policies") {
      if (value == "-") continue;
      std::istringstream list(value);
      std::string pair;
      while (std::getline(list, pair, ',')) {
        auto colon = pair.find(':');
        auto p = colon == std::string::npos ? std::nullopt : parse_policy(pair.substr(colon + 1));
        if (!p) throw TraceFormatError("line " + std::to_string(line) + ": bad policy override " + pair);
        c.model.policy_overrides[pair.substr(0, colon)] = *p;
      }
    } else {
      throw TraceFormatError("line " + std::to_string(line) + ": unknown config key " + key);
    }
  }
}

}  // namespace detail

inline TraceFile read_trace(std::istream& in) {
  TraceFile t;
  std::string text;
  std::size_t n = 0;
  bool header = false, has_fp = false, has_verdict = false;
  while (std::getline(in, text)) {
    ++n;
    if (text.empty()) continue;
    const auto space = text.find(' ');
    const std::string key = text.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : text.substr(space + 1);
    if (key == "permute-trace") {
      if (rest != "1") throw TraceFormatError("unsupported trace format version " + rest);
      header = true;
    } else if (key == "tool") {
      t.tool_version = rest.substr(rest.find(' ') + 1);
    } else if (key == "scenario") {
      t.scenario_path = rest;
    } else if (key == "scenario_sha256") {
      t.scenario_digest = rest;
    } else if (key == "config") {
      detail::parse_config(rest, t.config, n);
    } else if (key == "trace") {
      t.index = detail::to_u64(rest, n);
    } else if (key == "step") {
      std::istringstream fields(rest);
      std::string k, word, thread, kind, subject, payload;
      if (!(fields >> k >> word >> thread >> kind >> subject >> payload) || word != "thread")
        throw TraceFormatError("line " + std::to_string(n) + ": malformed step record");
      if (detail::to_u64(k, n) != t.steps.size() + 1)
        throw TraceFormatError("line " + std::to_string(n) + ": steps out of order");
      ScheduleStep s;
      s.thread = ThreadId{static_cast<std::uint32_t>(detail::to_u64(thread, n))};
      s.kind = kind;
      s.subject = subject;
      if (payload != "-") {
        try {
          s.payload = std::stoll(payload);
        } catch (const std::exception&) {
          throw TraceFormatError("line " + std::to_string(n) + ": bad payload " + payload);
        }
      }
      t.steps.push_back(std::move(s));
    } else if (key == "verdict") {
      auto v = parse_verdict(rest);
      if (!v) throw TraceFormatError("line " + std::to_string(n) + ": unknown verdict " + rest);
      t.verdict = *v;
      has_verdict = true;
    } else if (key == "message") {
      t.message = rest;
    } else if (key == "fingerprint") {
      t.fingerprint = rest;
      has_fp = true;
    } else {
      throw TraceFormatError("line " + std::to_string(n) + ": unknown record '" + key + "'");
    }
  }
  if (!header) throw TraceFormatError("not a permute trace file");
  if (!has_verdict || !has_fp) throw TraceFormatError("trace file is truncated");
  return t;
}

inline std::filesystem::path trace_path(const std::filesystem::path& dir, std::uint64_t index) {
  return dir / ("trace_" + std::to_string(index) + ".trace");
}

inline TraceFile load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TraceFormatError("cannot open " + path.string());
  return read_trace(in);
}

inline void save_trace(const std::filesystem::path& path, const TraceFile& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << write_trace(t);
  out.flush();
  if (!out) throw Error("cannot write trace file " + path.string());
}

}  // namespace permute::cli
