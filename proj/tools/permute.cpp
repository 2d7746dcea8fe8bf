#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <unistd.h>

#include "permute/cli/app.hpp"
#include "permute/version.hpp"

#ifndef PERMUTE_CORPUS_DIR
#define PERMUTE_CORPUS_DIR "corpus"
#endif

int main(int argc, char** argv) {
  using namespace permute::cli;

  CLI::App app{"permute: DPOR model checker for multithreaded programs"};
  app.set_version_flag("--version", std::string(permute::kVersion));
  app.require_subcommand(1);

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "explore every interleaving of a scenario");
  check_cmd->add_option("scenario", check.scenario_path, "scenario file")->required();
  check_cmd->add_option("--max-thread-depth", check.max_thread_depth, "per-thread transition budget")
      ->check(CLI::PositiveNumber);
  check_cmd->add_flag("--first-deadlock", check.first_deadlock, "stop at the first deadlock");
  check_cmd->add_flag("--stop-at-first-failure", check.stop_at_first_failure,
                      "stop at the first assertion failure or fault");
  check_cmd->add_option("--max-spurious-wakeups", check.max_spurious_wakeups,
                        "spurious wakeups allowed per condition variable (default 0)")
      ->check(CLI::NonNegativeNumber);
  check_cmd->add_option("--policy", check.policy, "wakeup policy for semaphores and condition variables")
      ->check(CLI::IsMember({"fifo", "lifo", "arb_indep", "arb_dep", "arb_fused"}));
  check_cmd->add_flag("--no-sleep-sets", check.no_sleep_sets, "disable sleep sets");
  check_cmd->add_flag("--keep-all-traces", check.keep_all_traces, "persist every trace, not only findings");
  check_cmd->add_option("--trace-dir", check.trace_dir, "trace directory (default $PERMUTE_TRACE_DIR or ./permute-traces)");
  check_cmd->add_flag("--quiet", check.quiet, "print only the key: value report");

  ReplayOptions replay;
  auto* replay_cmd = app.add_subcommand("replay", "step through a persisted trace");
  replay_cmd->add_option("trace-dir", replay.trace_dir, "directory holding trace_<k>.trace files")->required();
  replay_cmd->add_option("index", replay.index, "trace index")->required();
  replay_cmd->add_flag("--verify", replay.verify, "replay to the end and compare the recorded fingerprint");

  std::string corpus_dir = PERMUTE_CORPUS_DIR;
  if (const char* env = std::getenv("PERMUTE_CORPUS_DIR"); env && *env) corpus_dir = env;
  auto* corpus_cmd = app.add_subcommand("corpus", "benchmark scenarios");
  corpus_cmd->require_subcommand(1);
  auto* list_cmd = corpus_cmd->add_subcommand("list", "list the shipped scenarios");
  list_cmd->add_option("--dir", corpus_dir, "corpus directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (check_cmd->parsed()) return run_check(check, std::cout, std::cerr);
  if (replay_cmd->parsed()) {
    replay.prompt = isatty(STDIN_FILENO) != 0;
    return run_replay(replay, std::cin, std::cout, std::cerr);
  }
  return run_corpus_list(corpus_dir, std::cout, std::cerr);
}
