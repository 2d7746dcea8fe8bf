#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "permute/cli/replay_console.hpp"
#include "permute/cli/report_output.hpp"
#include "permute/cli/trace_file.hpp"
#include "permute/dpor/explorer.hpp"
#include "permute/scenario/interpreter.hpp"
#include "permute/scenario/parser.hpp"

namespace permute::cli {

enum ExitCode : int { kClean = 0, kFindings = 1, kUsage = 2 };

struct CheckOptions {
  std::string scenario_path;
  std::optional<std::uint32_t> max_thread_depth;
  std::optional<std::uint32_t> max_spurious_wakeups;
  std::optional<std::string> policy;
  std::optional<std::string> trace_dir;
  bool first_deadlock = false;
  bool stop_at_first_failure = false;
  bool no_sleep_sets = false;
  bool keep_all_traces = false;
  bool quiet = false;
};

inline std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::filesystem::path default_trace_dir() {
  if (const char* env = std::getenv("PERMUTE_TRACE_DIR"); env && *env) return env;
  return "permute-traces";
}

// Config from the scenario's options, then the command-line flags on top.
inline ExplorationConfig make_config(const scenario::ScenarioProgram& program, const CheckOptions& o) {
  ExplorationConfig c;
  scenario::apply_options(program, c);
  if (o.max_thread_depth) c.max_depth_per_thread = *o.max_thread_depth;
  if (o.max_spurious_wakeups) c.model.max_spurious_wakeups = *o.max_spurious_wakeups;
  if (o.first_deadlock) c.stop_at_first_deadlock = true;
  if (o.stop_at_first_failure) c.stop_at_first_failure = true;
  if (o.no_sleep_sets) c.sleep_sets = false;
  if (o.keep_all_traces) c.keep_all_traces = true;
  if (o.policy) {
    auto p = parse_policy(*o.policy);
    if (!p) throw ConfigurationError("unknown wakeup policy '" + *o.policy + "'");
    c.model.policy_overrides["sem"] = *p;
    c.model.policy_overrides["cond"] = *p;
  }
  return c;
}

inline void clear_old_traces(const std::filesystem::path& dir) {
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("trace_") && entry.path().extension() == ".trace")
      std::filesystem::remove(entry.path());
  }
}

inline int run_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  const auto text = read_file(o.scenario_path);
  if (!text) {
    err << "permute: cannot read scenario " << o.scenario_path << "\n";
    return kUsage;
  }
  try {
    auto program = scenario::parse_scenario(*text);
    const ExplorationConfig config = make_config(program, o);

    const std::filesystem::path dir = o.trace_dir ? std::filesystem::path(*o.trace_dir) : default_trace_dir();
    std::filesystem::create_directories(dir);
    clear_old_traces(dir);

    TraceFile header;
    header.scenario_path = std::filesystem::absolute(o.scenario_path).lexically_normal().string();
    header.scenario_digest = sha256(*text).hex();
    header.config = config;

    Explorer explorer(scenario::instantiate(std::move(program)), config);
    explorer.on_trace([&](const TraceRecord& r) {
      TraceFile t = header;
      t.index = r.index;
      t.steps = r.schedule;
      t.verdict = r.verdict;
      t.message = r.message;
      t.fingerprint = r.final_fingerprint.hex();
      save_trace(trace_path(dir, r.index), t);
    });

    const auto start = std::chrono::steady_clock::now();
    const ExplorationReport report = explorer.run();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);

    out << render_report(report, static_cast<std::uint64_t>(ms.count()));
    if (!o.quiet) out << render_findings(report);
    return report.has_findings() ? kFindings : kClean;
  } catch (const scenario::ScenarioError& e) {
    err << o.scenario_path << ":" << e.what() << "\n";
  } catch (const Error& e) {
    err << "permute: " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "permute: " << e.what() << "\n";
  }
  return kUsage;
}

struct ReplayOptions {
  std::string trace_dir;
  std::uint64_t index = 0;
  bool verify = false;  // replay to the end and compare the footer fingerprint
  bool prompt = false;
};

inline int run_replay(const ReplayOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    const TraceFile t = load_trace(trace_path(o.trace_dir, o.index));
    const auto text = read_file(t.scenario_path);
    if (!text) {
      err << "permute: cannot read scenario " << t.scenario_path << "\n";
      return kUsage;
    }
    if (sha256(*text).hex() != t.scenario_digest) {
      err << "permute: scenario " << t.scenario_path << " changed since the trace was recorded\n";
      return kUsage;
    }
    Session session(scenario::instantiate(scenario::parse_scenario(*text)), t.config.model);
    ReplayConsole console(std::move(session), t.steps, t.index);
    if (o.verify) {
      console.go_to(console.length());
      const std::string got = fingerprint(console.state()).hex();
      out << "trace: " << t.index << "; verdict: " << to_string(t.verdict) << "; fingerprint "
          << (got == t.fingerprint ? "matches" : "differs") << "\n";
      return got == t.fingerprint ? kClean : kFindings;
    }
    console.run(in, out, o.prompt);
    return kClean;
  } catch (const scenario::ScenarioError& e) {
    err << "permute: scenario: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "permute: " << e.what() << "\n";
  }
  return kUsage;
}

// First comment line of a scenario, used as its description.
inline std::string describe_scenario(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] != '#') break;
    auto body = line.find_first_not_of("# \t", start);
    if (body != std::string::npos) return line.substr(body);
  }
  return "";
}

inline int run_corpus_list(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::is_directory(dir)) {
    err << "permute: corpus directory " << dir.string() << " not found\n";
    return kUsage;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".scn") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    out << f.stem().string();
    if (auto text = read_file(f)) {
      const auto d = describe_scenario(*text);
      if (!d.empty()) out << "  " << d;
    }
    out << "\n";
  }
  return kClean;
}

}  // namespace permute::cli
