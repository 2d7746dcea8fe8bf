#include <gtest/gtest.h>

#include <cstdio>
#include <random>
#include <sys/wait.h>

#include "permute/cli/app.hpp"
#include "permute/cli/replay_console.hpp"
#include "permute/cli/report_output.hpp"
#include "permute/cli/trace_file.hpp"
#include "support/corpus.hpp"

namespace permute::cli {
namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("permute_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path corpus(const std::string& name) { return testing::corpus_dir() / (name + ".scn"); }

struct Run {
  int code;
  std::string out, err;
};

Run check(CheckOptions o, const fs::path& dir) {
  o.trace_dir = dir.string();
  std::ostringstream out, err;
  const int code = run_check(o, out, err);
  return {code, out.str(), err.str()};
}

CheckOptions scenario(const std::string& name) {
  CheckOptions o;
  o.scenario_path = corpus(name).string();
  return o;
}

std::string value_of(const std::string& report, const std::string& key) {
  const auto at = report.find(key + ": ");
  if (at == std::string::npos) return "<missing>";
  const auto start = at + key.size() + 2;
  return report.substr(start, report.find('\n', start) - start);
}

TEST(Report, KeysInFixedOrder) {
  ExplorationReport r;
  r.total_transitions = 12;
  r.traces = 3;
  r.deadlocks = 1;
  r.first_deadlock_trace = 2;
  EXPECT_EQ(render_report(r, 5),
            "transitions: 12\ntraces: 3\ndeadlocks: 1\nfirst_deadlock_trace: 2\nassertion_failures: 0\n"
            "data_races: 0\nbudget_exhausted_traces: 0\nfaults: 0\nelapsed_ms: 5\n");
  EXPECT_NE(render_report(ExplorationReport{}, 0).find("\nfirst_deadlock_trace: none\n"), std::string::npos);
}

TEST(TraceFile, RoundTrips) {
  TraceFile t;
  t.scenario_path = "/x/y.scn";
  t.scenario_digest = std::string(64, 'a');
  t.config.max_depth_per_thread = 5;
  t.config.model.policy_overrides["sem"] = WakeupPolicy::Lifo;
  t.index = 7;
  t.steps = {{ThreadId{0}, "thread_create", "thread1", std::nullopt, ""}, {ThreadId{1}, "write", "x", -3, ""}};
  t.verdict = Verdict::AssertionFailure;
  t.message = "two\nlines";
  t.fingerprint = std::string(64, 'b');
  const std::string text = write_trace(t);
  std::istringstream in(text);
  const TraceFile back = read_trace(in);
  EXPECT_EQ(back.index, 7u);
  EXPECT_EQ(back.steps, t.steps);
  EXPECT_EQ(back.verdict, Verdict::AssertionFailure);
  EXPECT_EQ(back.message, "two lines");
  EXPECT_EQ(back.config.max_depth_per_thread, 5u);
  EXPECT_EQ(back.config.model.policy_overrides.at("sem"), WakeupPolicy::Lifo);
  EXPECT_EQ(write_trace(back), text);
}

TEST(TraceFile, RejectsTruncatedFiles) {
  TraceFile t;
  t.fingerprint = std::string(64, 'c');
  std::string text = write_trace(t);
  std::istringstream cut(text.substr(0, text.find("verdict")));
  EXPECT_THROW(read_trace(cut), TraceFormatError);
  std::istringstream junk("hello\n");
  EXPECT_THROW(read_trace(junk), TraceFormatError);
}

TEST(Check, MissingScenarioIsAUsageError) {
  TempDir dir;
  CheckOptions o;
  o.scenario_path = "/nonexistent/file.scn";
  const auto r = check(o, dir.path);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cannot read"), std::string::npos);
}

TEST(Check, ParseErrorIsAUsageError) {
  TempDir dir;
  const auto bad = dir.path / "bad.scn";
  std::ofstream(bad) << "mutex m\nthread t { lock q; }\n";
  CheckOptions o;
  o.scenario_path = bad.string();
  const auto r = check(o, dir.path);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("2:12: undeclared identifier 'q'"), std::string::npos) << r.err;
}

TEST(Check, CleanScenarioExitsZero) {
  TempDir dir;
  const auto r = check(scenario("barrier_10"), dir.path);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(value_of(r.out, "traces"), "1");
  EXPECT_EQ(value_of(r.out, "deadlocks"), "0");
}

TEST(Check, FirstDeadlockStopsEarly) {
  TempDir dir;
  const auto full = check(scenario("philosophers_mut_deadlock_3"), dir.path);
  auto o = scenario("philosophers_mut_deadlock_3");
  o.first_deadlock = true;
  const auto first = check(o, dir.path);
  EXPECT_EQ(full.code, 1);
  EXPECT_EQ(first.code, 1);
  EXPECT_EQ(value_of(first.out, "deadlocks"), "1");
  EXPECT_LT(std::stoull(value_of(first.out, "traces")), std::stoull(value_of(full.out, "traces")));
}

TEST(Check, PolicyFlagReachesSemaphores) {
  TempDir dir;
  const auto plain = check(scenario("sem_three_waiters"), dir.path);
  auto o = scenario("sem_three_waiters");
  o.policy = "lifo";
  const auto lifo = check(o, dir.path);
  o.policy = "fifo";
  const auto fifo = check(o, dir.path);
  EXPECT_NE(value_of(lifo.out, "traces"), value_of(fifo.out, "traces"));
  o.policy = "sideways";
  EXPECT_EQ(check(o, dir.path).code, 2);
  (void)plain;
}

TEST(Check, PersistsOnlyFindingsByDefault) {
  TempDir dir;
  const auto r = check(scenario("small_lost_update"), dir.path);
  ASSERT_EQ(r.code, 1);
  std::size_t failures = 0, races = 0;
  for (const auto& e : fs::directory_iterator(dir.path)) {
    const auto t = load_trace(e.path());
    if (t.verdict == Verdict::AssertionFailure)
      ++failures;
    else
      ++races;  // a race is reported on an otherwise completed trace
  }
  EXPECT_EQ(failures, std::stoull(value_of(r.out, "assertion_failures")));
  EXPECT_EQ(races, std::stoull(value_of(r.out, "data_races")));
}

TEST(Check, StaleTracesAreCleared) {
  TempDir dir;
  auto o = scenario("small_lock_inversion");
  o.keep_all_traces = true;
  check(o, dir.path);
  const auto before = std::distance(fs::directory_iterator(dir.path), fs::directory_iterator{});
  check(scenario("barrier_10"), dir.path);
  const auto after = std::distance(fs::directory_iterator(dir.path), fs::directory_iterator{});
  EXPECT_GT(before, 1);
  EXPECT_EQ(after, 0);
}

std::uint64_t first_deadlock(const std::string& out) { return std::stoull(value_of(out, "first_deadlock_trace")); }

TEST(Replay, VerifyMatchesTheRecordedState) {
  TempDir dir;
  const auto r = check(scenario("philosophers_mut_deadlock_3"), dir.path);
  ReplayOptions o{dir.path.string(), first_deadlock(r.out), true, false};
  std::istringstream in;
  std::ostringstream out, err;
  EXPECT_EQ(run_replay(o, in, out, err), 0) << err.str();
  EXPECT_NE(out.str().find("verdict: deadlock; fingerprint matches"), std::string::npos) << out.str();
}

TEST(Replay, ChangedScenarioIsRefused) {
  TempDir dir;
  const auto copy = dir.path / "s.scn";
  fs::copy_file(corpus("small_lock_inversion"), copy);
  CheckOptions c;
  c.scenario_path = copy.string();
  const auto r = check(c, dir.path);
  std::ofstream(copy, std::ios::app) << "# edited\n";
  ReplayOptions o{dir.path.string(), first_deadlock(r.out), true, false};
  std::istringstream in;
  std::ostringstream out, err;
  EXPECT_EQ(run_replay(o, in, out, err), 2);
  EXPECT_NE(err.str().find("changed"), std::string::npos);
}

TEST(ReplayConsole, Navigation) {
  TempDir dir;
  auto c = scenario("philosophers_mut_3");
  c.keep_all_traces = true;
  check(c, dir.path);
  TraceFile t;
  for (const auto& e : fs::directory_iterator(dir.path))
    if (auto u = load_trace(e.path()); u.steps.size() > t.steps.size()) t = u;
  ASSERT_GE(t.steps.size(), 20u);
  const auto l = testing::load("philosophers_mut_3");
  ReplayConsole console(Session(l.program, t.config.model), t.steps, t.index);
  std::ostringstream out;
  console.execute("goto 0", out);
  EXPECT_NE(out.str().find("transition: 0"), std::string::npos);
  out.str("");
  console.execute("forward 15", out);
  EXPECT_NE(out.str().find("transition: 15"), std::string::npos);
  const auto at15 = fingerprint(console.state());
  console.execute("forward 4", out);
  console.execute("back 4", out);
  EXPECT_EQ(console.position(), 15u);
  EXPECT_EQ(fingerprint(console.state()), at15);
  out.str("");
  console.execute("back 99", out);
  EXPECT_NE(out.str().find("position unchanged"), std::string::npos);
  EXPECT_EQ(console.position(), 15u);
  out.str("");
  console.execute("forward x", out);
  EXPECT_EQ(out.str(), "usage: forward [N]\n");
  EXPECT_FALSE(console.execute("quit", out));
  console.go_to(console.length());
  EXPECT_EQ(fingerprint(console.state()).hex(), t.fingerprint);
}

Run shell(const std::string& args) {
  const std::string cmd = std::string(PERMUTE_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, ""};
}

TEST(Binary, CheckAndListWork) {
  TempDir dir;
  const auto r = shell("check " + corpus("barrier_10").string() + " --trace-dir " + dir.path.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(value_of(r.out, "traces"), "1");
  EXPECT_EQ(shell("check").code, 2);
  EXPECT_EQ(shell("frobnicate").code, 2);
  const auto list = shell("corpus list");
  EXPECT_EQ(list.code, 0);
  EXPECT_NE(list.out.find("philosophers_mut_3"), std::string::npos);
}

}  // namespace
}  // namespace permute::cli
