#include <gtest/gtest.h>

#include "permute/dpor/explorer.hpp"
#include "permute/primitives/mutex.hpp"
#include "permute/primitives/semaphore.hpp"
#include "support/corpus.hpp"
#include "support/naive_dfs.hpp"

namespace permute {
namespace {

using testing::load;
using testing::load_text;

constexpr ThreadId T1{1}, T2{2}, T3{3};
constexpr ObjectId M{0}, S1{1}, S2{2};

TransitionPtr lock(ThreadId t) { return std::make_shared<MutexLock>(t, M, WakeupPolicy::ArbitraryNoEnqueue); }
TransitionPtr post(ThreadId t, ObjectId s) { return std::make_shared<SemPost>(t, s, WakeupPolicy::ArbitraryNoEnqueue); }

// Four threads with the given pending transitions; thread 0 idles.
StackEntry frame_with(std::vector<std::pair<ThreadId, TransitionPtr>> pending) {
  StackEntry e;
  for (int i = 0; i < 4; ++i) e.pre_state.add_thread();
  e.pre_state.add_object(M, std::make_shared<MutexObj>("m", WakeupPolicy::ArbitraryNoEnqueue));
  e.pre_state.add_object(S1, std::make_shared<SemObj>("s1", 0, WakeupPolicy::ArbitraryNoEnqueue));
  e.pre_state.add_object(S2, std::make_shared<SemObj>("s2", 0, WakeupPolicy::ArbitraryNoEnqueue));
  for (auto& [t, p] : pending) e.pre_state.thread(t).pending = p;
  e.enabled = enabled_threads(e.pre_state);
  return e;
}

TEST(SelectNext, LowestThreadFirst) {
  auto e = frame_with({{T1, lock(T1)}, {T3, lock(T3)}});
  e.backtrack = {T3, T1};
  EXPECT_EQ(select_next(e), T1);
}

TEST(SelectNext, NothingLeft) {
  auto e = frame_with({{T2, lock(T2)}});
  e.backtrack = {T2};
  e.done = {T2};
  EXPECT_EQ(select_next(e), std::nullopt);
}

TEST(SelectNext, SkipsSleepingTransitions) {
  auto e = frame_with({{T2, lock(T2)}, {T3, lock(T3)}});
  e.backtrack = {T2, T3};
  e.sleep = {e.pre_state.thread(T3).pending};
  EXPECT_EQ(select_next(e), T2);
  e.sleep = {e.pre_state.thread(T2).pending};
  EXPECT_EQ(select_next(e), T3);
}

TEST(SleepSet, EmptyStaysEmpty) { EXPECT_TRUE(propagate_sleep_set({}, *lock(T1)).empty()); }

TEST(SleepSet, IndependentEntriesSurvive) {
  EXPECT_EQ(propagate_sleep_set({post(T2, S2)}, *post(T1, S1)).size(), 1u);
}

TEST(SleepSet, DependentEntriesWakeUp) { EXPECT_TRUE(propagate_sleep_set({lock(T2)}, *lock(T1)).empty()); }

TEST(Backtrack, EmptyTraceChangesNothing) {
  std::vector<StackEntry> stack{frame_with({{T1, lock(T1)}})};
  update_backtrack_sets(stack, CausalHistory{}, *lock(T1));
  EXPECT_TRUE(stack[0].backtrack.empty());
}

TEST(Backtrack, RacingLockAddsTheOtherThread) {
  std::vector<StackEntry> stack{frame_with({{T1, lock(T1)}, {T2, lock(T2)}})};
  stack[0].backtrack = {T1};
  CausalHistory h;
  h.push(lock(T1));
  update_backtrack_sets(stack, h, *lock(T2));
  EXPECT_EQ(stack[0].backtrack, (std::set<ThreadId>{T1, T2}));
}

TEST(Backtrack, IndependentStepAddsNothing) {
  std::vector<StackEntry> stack{frame_with({{T1, post(T1, S1)}, {T2, post(T2, S2)}})};
  stack[0].backtrack = {T1};
  CausalHistory h;
  h.push(post(T1, S1));
  update_backtrack_sets(stack, h, *post(T2, S2));
  EXPECT_EQ(stack[0].backtrack, std::set<ThreadId>{T1});
}

TEST(Deadlock, AllExitedIsCompleted) {
  ModelState s;
  s.add_thread();
  s.thread(ThreadId{0}).exited = true;
  EXPECT_EQ(detect_deadlock(s, std::nullopt), Verdict::Completed);
}

TEST(Deadlock, BlockedUnderBudgetIsBudgetExhausted) {
  ModelState s;
  s.add_thread();
  s.add_thread();
  s.add_object(S1, std::make_shared<SemObj>("s", 0, WakeupPolicy::ArbitraryNoEnqueue));
  s.thread(T1).pending = std::make_shared<SemWait>(T1, S1, WakeupPolicy::ArbitraryNoEnqueue);
  s.thread(ThreadId{0}).pending = lock(ThreadId{0});
  s.thread(ThreadId{0}).executed = 4;
  s.add_object(M, [] {
    auto m = std::make_shared<MutexObj>("m", WakeupPolicy::ArbitraryNoEnqueue);
    m->acquire(ThreadId{1});
    return m;
  }());
  EXPECT_EQ(detect_deadlock(s, std::nullopt), Verdict::Deadlock);
  EXPECT_EQ(detect_deadlock(s, 4u), Verdict::BudgetExhausted);
}

TEST(Explore, EmptyProgramIsOneTrace) {
  auto l = load_text("# nothing\n");
  const auto r = explore(l.program, l.config);
  EXPECT_EQ(r.traces, 1u);
  EXPECT_EQ(r.total_transitions, 0u);
}

TEST(Explore, TwoLockersGiveTwoTraces) {
  auto l = load_text("mutex m\nthread a { lock m; unlock m; }\nthread b { lock m; unlock m; }\n");
  EXPECT_EQ(explore(l.program, l.config).traces, 2u);
  EXPECT_EQ(testing::NaiveDfs(l.program, l.config.model, std::nullopt).run().final_fingerprints.size(), 1u);
}

TEST(Explore, ForkCycleDeadlocks) {
  auto l = load("philosophers_mut_deadlock_2");
  const auto r = explore(l.program, l.config);
  EXPECT_GE(r.deadlocks, 1u);
  ASSERT_TRUE(r.first_deadlock_trace);
}

TEST(Explore, StopsAtFirstDeadlock) {
  auto l = load("philosophers_mut_deadlock_3");
  const auto full = explore(l.program, l.config);
  l.config.stop_at_first_deadlock = true;
  const auto first = explore(l.program, l.config);
  EXPECT_EQ(first.deadlocks, 1u);
  EXPECT_EQ(first.first_deadlock_trace, first.traces);
  EXPECT_LT(first.traces, full.traces);
}

TEST(Explore, AssertionFailureNamesItsTrace) {
  auto l = load("small_lost_update");
  std::vector<std::uint64_t> failing;
  const auto r = explore(l.program, l.config, [&](const TraceRecord& t) {
    if (t.verdict == Verdict::AssertionFailure) failing.push_back(t.index);
  });
  ASSERT_FALSE(r.assertion_failures.empty());
  for (std::size_t i = 0; i < r.assertion_failures.size(); ++i) {
    EXPECT_EQ(r.assertion_failures[i].trace, failing[i]);
    EXPECT_EQ(r.assertion_failures[i].message, "both increments landed");
  }
}

TEST(Explore, BudgetCapsEveryThread) {
  auto l = load("producer_consumer_if");
  l.config.max_depth_per_thread = 6;
  l.config.keep_all_traces = true;
  std::uint64_t seen = 0;
  explore(l.program, l.config, [&](const TraceRecord& t) {
    ++seen;
    std::map<ThreadId, int> count;
    for (const auto& s : t.schedule)
      if (s.kind != "thread_exit") ++count[s.thread];
    for (const auto& [thread, n] : count) EXPECT_LE(n, 6) << "thread " << thread << " in trace " << t.index;
  });
  EXPECT_GT(seen, 0u);
}

TEST(Explore, SleepSetsNeverAddTraces) {
  for (const char* name : {"philosophers_mut_3", "philosophers_mut_4", "small_rwlock_mixed"}) {
    auto l = load(name);
    const auto with = explore(l.program, l.config);
    l.config.sleep_sets = false;
    const auto without = explore(l.program, l.config);
    EXPECT_LE(with.traces, without.traces) << name;
    EXPECT_EQ(with.deadlocks > 0, without.deadlocks > 0) << name;
  }
}

TEST(Explore, RaceHeuristic) {
  auto l = load("race_unguarded");
  const auto r = explore(l.program, l.config);
  ASSERT_EQ(r.data_races.size(), 1u);
  EXPECT_EQ(r.data_races[0].var, "x");
  EXPECT_EQ(r.data_races[0].kinds, "write/write");
  auto g = load("race_guarded");
  EXPECT_TRUE(explore(g.program, g.config).data_races.empty());
  auto reads = load_text("var x = 0\nthread a { v = read x; }\nthread b { v = read x; }\n");
  EXPECT_TRUE(explore(reads.program, reads.config).data_races.empty());
}

TEST(Explore, BarrierIsOneTrace) {
  auto l = load("barrier_10");
  const auto r = explore(l.program, l.config);
  EXPECT_EQ(r.traces, 1u);
  EXPECT_EQ(r.deadlocks, 0u);
}

// The oracle's configuration memo changes nothing but speed.
TEST(Oracle, MemoMatchesTheFullWalk) {
  for (const char* name : {"small_lost_update", "small_guarded_update", "small_lock_inversion", "small_broadcast_spurious",
                           "small_spin_budget", "small_rwwlock", "small_barrier_unmet", "philosophers_sem_deadlock_2"}) {
    const auto l = load(name);
    testing::NaiveDfs memo(l.program, l.config.model, l.config.max_depth_per_thread);
    testing::NaiveDfs full(l.program, l.config.model, l.config.max_depth_per_thread);
    full.walk_every_path();
    const auto a = memo.run(), b = full.run();
    EXPECT_EQ(a.traces, b.traces) << name;
    EXPECT_EQ(a.assertion_failures, b.assertion_failures) << name;
    EXPECT_EQ(a.budget_exhausted, b.budget_exhausted) << name;
    EXPECT_EQ(a.faults, b.faults) << name;
    EXPECT_EQ(a.deadlock_fingerprints, b.deadlock_fingerprints) << name;
    EXPECT_EQ(a.final_fingerprints, b.final_fingerprints) << name;
    EXPECT_EQ(a.assertion_messages, b.assertion_messages) << name;
  }
}

// Explorer against brute force: same deadlock states, same assertion
// messages, same final states.
void expect_equivalent(const testing::Loaded& l, const std::string& what) {
  const auto oracle = testing::NaiveDfs(l.program, l.config.model, l.config.max_depth_per_thread).run();
  for (bool sleep : {true, false}) {
    auto config = l.config;
    config.sleep_sets = sleep;
    const auto dpor = testing::explore_sets(l.program, config);
    const std::string tag = what + (sleep ? "" : " without sleep sets");
    EXPECT_EQ(dpor.deadlock_fingerprints, oracle.deadlock_fingerprints) << tag;
    EXPECT_EQ(dpor.assertion_messages, oracle.assertion_messages) << tag;
    EXPECT_EQ(dpor.final_fingerprints, oracle.final_fingerprints) << tag;
    EXPECT_LE(dpor.report.traces, oracle.traces) << tag;
  }
}

class OracleEquivalence : public ::testing::TestWithParam<std::string> {};

TEST_P(OracleEquivalence, DefaultConfig) { expect_equivalent(load(GetParam()), GetParam()); }

INSTANTIATE_TEST_SUITE_P(SmallCorpus, OracleEquivalence, ::testing::ValuesIn(testing::corpus_names("small_")));

INSTANTIATE_TEST_SUITE_P(Larger, OracleEquivalence,
                         ::testing::Values("philosophers_mut_deadlock_2", "philosophers_mut_2", "philosophers_sem_deadlock_3",
                                           "producer_consumer_if", "race_unguarded"));

class PolicyEquivalence : public ::testing::TestWithParam<std::string> {};

TEST_P(PolicyEquivalence, UnderEachPolicy) {
  for (auto p : {WakeupPolicy::Fifo, WakeupPolicy::Lifo, WakeupPolicy::ArbitraryIndependentEnqueue,
                 WakeupPolicy::ArbitraryDependentEnqueue}) {
    auto l = load(GetParam());
    l.config.model.policy_overrides["sem"] = p;
    l.config.model.policy_overrides["cond"] = p;
    expect_equivalent(l, GetParam() + " " + std::string(to_string(p)));
  }
}

INSTANTIATE_TEST_SUITE_P(SmallCorpus, PolicyEquivalence, ::testing::ValuesIn(testing::corpus_names("small_")));

INSTANTIATE_TEST_SUITE_P(Larger, PolicyEquivalence,
                         ::testing::Values("philosophers_sem_deadlock_2", "philosophers_sem_deadlock_3", "philosophers_sem_3",
                                           "sem_three_waiters", "producer_consumer_if", "producer_consumer_while"));

}  // namespace
}  // namespace permute
