#include <gtest/gtest.h>

#include "permute/core/fingerprint.hpp"
#include "permute/core/relations.hpp"
#include "permute/primitives/barrier.hpp"
#include "permute/primitives/condvar.hpp"
#include "permute/primitives/mutex.hpp"
#include "permute/primitives/rwlock.hpp"
#include "permute/primitives/semaphore.hpp"
#include "permute/primitives/thread_ops.hpp"
#include "permute/primitives/variable.hpp"

namespace permute {
namespace {

constexpr ThreadId T0{0}, T1{1}, T2{2}, T3{3};
constexpr ObjectId A{0}, B{1};

ModelState threads(int n) {
  ModelState s;
  for (int i = 0; i < n; ++i) s.add_thread();
  return s;
}

template <class T, class... Args>
ModelState run(const ModelState& s, Args&&... args) {
  return perform(s, T(std::forward<Args>(args)...));
}

// Mutex

TEST(Mutex, FreeMutexCanBeLocked) {
  auto s = threads(2);
  s.add_object(A, std::make_shared<MutexObj>("m", WakeupPolicy::ArbitraryNoEnqueue));
  MutexLock lock(T1, A, WakeupPolicy::ArbitraryNoEnqueue);
  EXPECT_TRUE(lock.enabled_in(s));
  s = perform(s, lock);
  EXPECT_EQ(s.get<MutexObj>(A).owner(), T1);
  EXPECT_FALSE(MutexLock(T0, A, WakeupPolicy::ArbitraryNoEnqueue).enabled_in(s));
}

TEST(Mutex, UnlockByNonOwnerIsAFinding) {
  auto s = threads(2);
  s.add_object(A, std::make_shared<MutexObj>("m", WakeupPolicy::ArbitraryNoEnqueue));
  MutexUnlock unlock(T1, A, WakeupPolicy::ArbitraryNoEnqueue);
  auto f = unlock.check(s);
  ASSERT_TRUE(f);
  EXPECT_EQ(f->kind, FindingKind::UsageError);
}

TEST(Mutex, FifoLetsTheFrontWaiterIn) {
  auto s = threads(3);
  s.add_object(A, std::make_shared<MutexObj>("m", WakeupPolicy::Fifo));
  s = run<MutexLockEnqueue>(s, T2, A, WakeupPolicy::Fifo);
  s = run<MutexLockEnqueue>(s, T1, A, WakeupPolicy::Fifo);
  EXPECT_TRUE(MutexLock(T2, A, WakeupPolicy::Fifo).enabled_in(s));
  EXPECT_FALSE(MutexLock(T1, A, WakeupPolicy::Fifo).enabled_in(s));
}

// Semaphore

ModelState sem(std::int64_t v, WakeupPolicy p, int n = 3) {
  auto s = threads(n);
  s.add_object(A, std::make_shared<SemObj>("s", v, p));
  return s;
}

TEST(Semaphore, PostIncrements) {
  auto s = run<SemPost>(sem(0, WakeupPolicy::Fifo), T1, A, WakeupPolicy::Fifo);
  EXPECT_EQ(s.get<SemObj>(A).value(), 1);
}

TEST(Semaphore, GetValueReadsInitialValue) {
  EXPECT_EQ(SemGetValue(T1, A, WakeupPolicy::Fifo).observe(sem(3, WakeupPolicy::Fifo)), 3);
}

TEST(Semaphore, FifoFinishGoesToQueueFront) {
  auto s = sem(1, WakeupPolicy::Fifo);
  s = run<SemEnqueue>(s, T1, A, WakeupPolicy::Fifo);
  s = run<SemEnqueue>(s, T2, A, WakeupPolicy::Fifo);
  EXPECT_TRUE(SemWaitFinish(T1, A, WakeupPolicy::Fifo).enabled_in(s));
  EXPECT_FALSE(SemWaitFinish(T2, A, WakeupPolicy::Fifo).enabled_in(s));
}

TEST(Semaphore, LifoFinishGoesToQueueTop) {
  auto s = sem(1, WakeupPolicy::Lifo);
  s = run<SemEnqueue>(s, T1, A, WakeupPolicy::Lifo);
  s = run<SemEnqueue>(s, T2, A, WakeupPolicy::Lifo);
  EXPECT_FALSE(SemWaitFinish(T1, A, WakeupPolicy::Lifo).enabled_in(s));
  EXPECT_TRUE(SemWaitFinish(T2, A, WakeupPolicy::Lifo).enabled_in(s));
}

TEST(Semaphore, ArbitraryLetsAnyWaiterFinish) {
  const auto p = WakeupPolicy::ArbitraryIndependentEnqueue;
  auto s = sem(1, p);
  s = run<SemEnqueue>(s, T2, A, p);
  s = run<SemEnqueue>(s, T1, A, p);
  EXPECT_TRUE(SemWaitFinish(T1, A, p).enabled_in(s));
  EXPECT_TRUE(SemWaitFinish(T2, A, p).enabled_in(s));
}

TEST(Semaphore, NothingFinishesAtZero) {
  auto s = run<SemEnqueue>(sem(0, WakeupPolicy::Fifo), T1, A, WakeupPolicy::Fifo);
  EXPECT_FALSE(SemWaitFinish(T1, A, WakeupPolicy::Fifo).enabled_in(s));
  EXPECT_FALSE(SemWait(T2, A, WakeupPolicy::ArbitraryNoEnqueue).enabled_in(sem(0, WakeupPolicy::ArbitraryNoEnqueue)));
}

TEST(Semaphore, EnqueueDependencePerPolicy) {
  auto enq = [](ThreadId t, WakeupPolicy p) { return SemEnqueue(t, A, p); };
  EXPECT_TRUE(dependent(enq(T1, WakeupPolicy::Fifo), enq(T2, WakeupPolicy::Fifo)));
  EXPECT_FALSE(dependent(enq(T1, WakeupPolicy::Fifo), SemWaitFinish(T2, A, WakeupPolicy::Fifo)));
  EXPECT_TRUE(dependent(enq(T1, WakeupPolicy::Lifo), SemWaitFinish(T2, A, WakeupPolicy::Lifo)));
  EXPECT_FALSE(dependent(enq(T1, WakeupPolicy::ArbitraryIndependentEnqueue),
                         enq(T2, WakeupPolicy::ArbitraryIndependentEnqueue)));
  EXPECT_TRUE(dependent(enq(T1, WakeupPolicy::ArbitraryDependentEnqueue),
                        enq(T2, WakeupPolicy::ArbitraryDependentEnqueue)));
  EXPECT_FALSE(dependent(SemPost(T1, A, WakeupPolicy::Fifo), SemPost(T2, A, WakeupPolicy::Fifo)));
  EXPECT_TRUE(dependent(SemPost(T1, A, WakeupPolicy::Fifo), SemWaitFinish(T2, A, WakeupPolicy::Fifo)));
}

// Condition variable

ModelState cond(WakeupPolicy p, std::uint32_t spurious, int n = 4) {
  auto s = threads(n);
  s.add_object(A, std::make_shared<CondObj>("c", p, spurious));
  s.add_object(B, std::make_shared<MutexObj>("m", WakeupPolicy::ArbitraryNoEnqueue));
  return s;
}

ModelState waiting(ModelState s, ThreadId t, WakeupPolicy p) {
  s = run<MutexLock>(s, t, B, WakeupPolicy::ArbitraryNoEnqueue);
  return run<CondEnqueue>(s, t, A, B, p);
}

TEST(CondVar, SpuriousWakeupConsumesBudget) {
  const auto p = WakeupPolicy::ArbitraryIndependentEnqueue;
  auto s = waiting(cond(p, 1), T1, p);
  CondWake wake(T1, A, B, p);
  ASSERT_TRUE(wake.enabled_in(s));
  s = perform(s, wake);
  EXPECT_EQ(s.spurious_used(A), 1u);
  EXPECT_EQ(s.get<MutexObj>(B).owner(), T1);
}

TEST(CondVar, NoSpuriousBudgetMeansNoWake) {
  const auto p = WakeupPolicy::ArbitraryIndependentEnqueue;
  auto s = waiting(cond(p, 0), T1, p);
  EXPECT_FALSE(CondWake(T1, A, B, p).enabled_in(s));
}

TEST(CondVar, GrantedWaiterStillNeedsTheMutex) {
  const auto p = WakeupPolicy::Fifo;
  auto s = waiting(cond(p, 0), T1, p);
  s = run<CondSignal>(s, T2, A, p);
  s = run<MutexLock>(s, T2, B, WakeupPolicy::ArbitraryNoEnqueue);
  EXPECT_FALSE(CondWake(T1, A, B, p).enabled_in(s));
  s = run<MutexUnlock>(s, T2, B, WakeupPolicy::ArbitraryNoEnqueue);
  EXPECT_TRUE(CondWake(T1, A, B, p).enabled_in(s));
}

TEST(CondVar, SignalOnEmptyQueueIsLost) {
  const auto p = WakeupPolicy::ArbitraryIndependentEnqueue;
  const auto s = cond(p, 0);
  const auto after = run<CondSignal>(s, T1, A, p);
  EXPECT_EQ(s.get<CondObj>(A).describe(), after.get<CondObj>(A).describe());
  const auto later = waiting(after, T2, p);
  EXPECT_FALSE(CondWake(T2, A, B, p).enabled_in(later));
}

TEST(CondVar, BroadcastReleasesEveryWaiter) {
  const auto p = WakeupPolicy::Fifo;
  auto s = cond(p, 0, 5);
  for (ThreadId t : {T1, T2, T3}) {
    s = waiting(s, t, p);
  }
  s = run<CondBroadcast>(s, ThreadId{4}, A, p);
  for (ThreadId t : {T1, T2, T3}) EXPECT_TRUE(CondWake(t, A, B, p).enabled_in(s));
}

TEST(CondVar, FifoSignalPicksTheOldestWaiter) {
  const auto p = WakeupPolicy::Fifo;
  auto s = waiting(waiting(cond(p, 0), T2, p), T1, p);
  s = run<CondSignal>(s, T3, A, p);
  EXPECT_TRUE(CondWake(T2, A, B, p).enabled_in(s));
  EXPECT_FALSE(CondWake(T1, A, B, p).enabled_in(s));
}

TEST(CondVar, ArbitrarySignalIsACreditForAnyone) {
  const auto p = WakeupPolicy::ArbitraryIndependentEnqueue;
  auto s = waiting(waiting(cond(p, 0), T2, p), T1, p);
  s = run<CondSignal>(s, T3, A, p);
  EXPECT_TRUE(CondWake(T1, A, B, p).enabled_in(s));
  EXPECT_TRUE(CondWake(T2, A, B, p).enabled_in(s));
  s = run<CondWake>(s, T1, A, B, p);
  s = run<MutexUnlock>(s, T1, B, WakeupPolicy::ArbitraryNoEnqueue);
  EXPECT_FALSE(CondWake(T2, A, B, p).enabled_in(s));
}

TEST(CondVar, WaitWithoutTheMutexIsAFinding) {
  const auto p = WakeupPolicy::Fifo;
  EXPECT_TRUE(CondEnqueue(T1, A, B, p).check(cond(p, 0)).has_value());
}

// Reader-writer locks

template <int N>
ModelState rw(RwPreference pref, int n = 4) {
  auto s = threads(n);
  s.add_object(A, std::make_shared<RwObject<N>>("l", pref));
  return s;
}

template <int N>
ModelState enq(ModelState s, ThreadId t, RwRole r) {
  const auto pref = s.get<RwObject<N>>(A).preference();
  return run<RwEnqueue<N>>(s, t, A, r, pref);
}

TEST(RwLock, WriterPreferredBlocksReadersWhileWritersWait) {
  auto s = enq<1>(enq<1>(rw<1>(RwPreference::Writer), T1, RwRole::Reader), T2, RwRole::Writer1);
  EXPECT_FALSE(RwAcquire<1>(T1, A, RwRole::Reader).enabled_in(s));
  EXPECT_TRUE(RwAcquire<1>(T2, A, RwRole::Writer1).enabled_in(s));
}

TEST(RwLock, ReaderPreferredLetsReadersThrough) {
  auto s = enq<1>(enq<1>(rw<1>(RwPreference::Reader), T1, RwRole::Reader), T2, RwRole::Writer1);
  EXPECT_TRUE(RwAcquire<1>(T1, A, RwRole::Reader).enabled_in(s));
  EXPECT_FALSE(RwAcquire<1>(T2, A, RwRole::Writer1).enabled_in(s));
}

TEST(RwLock, NoPreferenceFollowsArrivalOrder) {
  auto s = enq<1>(enq<1>(rw<1>(RwPreference::None), T2, RwRole::Writer1), T1, RwRole::Reader);
  EXPECT_FALSE(RwAcquire<1>(T1, A, RwRole::Reader).enabled_in(s));
  EXPECT_TRUE(RwAcquire<1>(T2, A, RwRole::Writer1).enabled_in(s));
}

TEST(RwLock, ReadersShare) {
  auto s = enq<1>(enq<1>(rw<1>(RwPreference::Writer), T1, RwRole::Reader), T2, RwRole::Reader);
  s = run<RwAcquire<1>>(s, T1, A, RwRole::Reader);
  EXPECT_TRUE(RwAcquire<1>(T2, A, RwRole::Reader).enabled_in(s));
  EXPECT_FALSE(dependent(RwAcquire<1>(T1, A, RwRole::Reader), RwAcquire<1>(T2, A, RwRole::Reader)));
  EXPECT_FALSE(coenabled(RwAcquire<1>(T1, A, RwRole::Reader), RwAcquire<1>(T2, A, RwRole::Writer1)));
}

TEST(RwwLock, ActiveReaderHoldsOffBothWriters) {
  auto s = rw<2>(RwPreference::Writer);
  s = enq<2>(s, T1, RwRole::Reader);
  s = run<RwAcquire<2>>(s, T1, A, RwRole::Reader);
  s = enq<2>(enq<2>(s, T2, RwRole::Writer1), T3, RwRole::Writer2);
  EXPECT_FALSE(RwAcquire<2>(T2, A, RwRole::Writer1).enabled_in(s));
  EXPECT_FALSE(RwAcquire<2>(T3, A, RwRole::Writer2).enabled_in(s));
  s = run<RwUnlock<2>>(s, T1, A);
  EXPECT_TRUE(RwAcquire<2>(T2, A, RwRole::Writer1).enabled_in(s));
  EXPECT_TRUE(RwAcquire<2>(T3, A, RwRole::Writer2).enabled_in(s));
}

TEST(RwwLock, ActiveWriterHoldsOffEveryoneElse) {
  auto s = rw<2>(RwPreference::Writer);
  s = enq<2>(s, T2, RwRole::Writer1);
  s = run<RwAcquire<2>>(s, T2, A, RwRole::Writer1);
  s = enq<2>(enq<2>(s, T1, RwRole::Reader), T3, RwRole::Writer2);
  EXPECT_FALSE(RwAcquire<2>(T1, A, RwRole::Reader).enabled_in(s));
  EXPECT_FALSE(RwAcquire<2>(T3, A, RwRole::Writer2).enabled_in(s));
}

TEST(RwLock, UnlockByNonHolderIsAFinding) {
  EXPECT_TRUE(RwUnlock<1>(T1, A).check(rw<1>(RwPreference::Writer)).has_value());
}

// Barrier

TEST(Barrier, OpensAtPartyCount) {
  auto s = threads(11);
  s.add_object(A, std::make_shared<BarrierObj>("b", 10));
  for (std::uint32_t i = 1; i <= 9; ++i) s = run<BarrierArrive>(s, ThreadId{i}, A);
  EXPECT_FALSE(BarrierWaitFinish(T1, A).enabled_in(s));
  s = run<BarrierArrive>(s, ThreadId{10}, A);
  EXPECT_TRUE(BarrierWaitFinish(T1, A).enabled_in(s));
}

// Threads

TEST(Threads, JoinWaitsForExit) {
  auto s = threads(2);
  ThreadJoin join(T0, T1);
  EXPECT_FALSE(join.enabled_in(s));
  s = run<ThreadExit>(s, T1);
  EXPECT_TRUE(join.enabled_in(s));
}

TEST(Threads, JoinOfSelfIsAFinding) { EXPECT_TRUE(ThreadJoin(T1, T1).check(threads(2)).has_value()); }

// Variables and assertions

TEST(Variables, ConflictsNeedAWrite) {
  EXPECT_TRUE(dependent(VarWrite(T1, "x", 1), VarWrite(T2, "x", 2)));
  EXPECT_TRUE(dependent(VarWrite(T1, "x", 1), VarRead(T2, "x")));
  EXPECT_FALSE(dependent(VarRead(T1, "x"), VarRead(T2, "x")));
  EXPECT_FALSE(dependent(VarWrite(T1, "x", 1), VarWrite(T2, "y", 1)));
}

TEST(Variables, ReadObservesLatestWrite) {
  auto s = run<VarWrite>(threads(2), T1, "x", 7);
  EXPECT_EQ(VarRead(T2, "x").observe(s), 7);
}

TEST(Assertions, TrueAssertionHasNoFinding) {
  AssertCheck ok(T1, [](const SharedVars&) { return 1 == 1; }, "1 == 1", {});
  EXPECT_FALSE(ok.check(threads(2)).has_value());
}

TEST(Assertions, FalseAssertionReportsItsMessage) {
  AssertCheck bad(T1, [](const SharedVars& v) { return v.at("x") == 1; }, "x == 1", {"x"});
  auto s = run<VarWrite>(threads(2), T1, "x", 2);
  auto f = bad.check(s);
  ASSERT_TRUE(f);
  EXPECT_EQ(f->kind, FindingKind::Assertion);
  EXPECT_EQ(f->message, "x == 1");
  EXPECT_TRUE(dependent(bad, VarWrite(T2, "x", 1)));
  EXPECT_FALSE(dependent(bad, VarWrite(T2, "y", 1)));
}

}  // namespace
}  // namespace permute
