#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permute/core/model_state.hpp"
#include "permute/core/transition.hpp"

namespace permute {

enum class RwRole : std::uint8_t { Reader = 0, Writer1 = 1, Writer2 = 2 };
enum class RwPreference { Reader, Writer, None };

inline std::string_view to_string(RwPreference p) {
  switch (p) {
    case RwPreference::Reader: return "reader_pref";
    case RwPreference::Writer: return "writer_pref";
    case RwPreference::None: return "no_pref";
  }
  return "?";
}

inline std::string_view to_string(RwRole r) {
  switch (r) {
    case RwRole::Reader: return "reader";
    case RwRole::Writer1: return "writer1";
    case RwRole::Writer2: return "writer2";
  }
  return "?";
}

// Reader-writer lock with FIFO queues per role. WriterKinds = 1 is the
// classic rwlock; WriterKinds = 2 is the readers-and-two-writers lock, which is
// always writer-preferred with no preference between the two writer kinds.
//
// Waiters are kept in one arrival-ordered list; the per-role queues are its
// filtered views, and the no-preference lock gates on the overall front.
template <int WriterKinds>
class RwObject final : public ObjectBase<RwObject<WriterKinds>> {
  static_assert(WriterKinds == 1 || WriterKinds == 2);

 public:
  RwObject(std::string name, RwPreference preference)
      : ObjectBase<RwObject<WriterKinds>>(std::move(name)), preference_(preference) {}

  std::string_view kind() const override { return WriterKinds == 1 ? "rwlock" : "rwwlock"; }

  RwPreference preference() const noexcept { return preference_; }
  const std::optional<ThreadId>& active_writer() const noexcept { return active_writer_; }
  const std::vector<ThreadId>& active_readers() const noexcept { return active_readers_; }
  const std::vector<std::pair<ThreadId, RwRole>>& queue() const noexcept { return queue_; }

  bool is_writer_locked() const noexcept { return active_writer_.has_value(); }
  bool holds(ThreadId t) const {
    return active_writer_ == t || std::find(active_readers_.begin(), active_readers_.end(), t) != active_readers_.end();
  }

  bool has_enqueued_writers() const {
    return std::any_of(queue_.begin(), queue_.end(), [](const auto& w) { return w.second != RwRole::Reader; });
  }
  bool has_enqueued_readers() const {
    return std::any_of(queue_.begin(), queue_.end(), [](const auto& w) { return w.second == RwRole::Reader; });
  }

  std::optional<ThreadId> front(RwRole role) const {
    for (const auto& [t, r] : queue_)
      if (r == role) return t;
    return std::nullopt;
  }

  bool can_acquire(ThreadId t, RwRole role) const {
    if (is_writer_locked() || front(role) != t) return false;
    if (preference_ == RwPreference::None && queue_.front().first != t) return false;
    if (role == RwRole::Reader) return preference_ != RwPreference::Writer || !has_enqueued_writers();
    return active_readers_.empty() && (preference_ != RwPreference::Reader || !has_enqueued_readers());
  }

  void enqueue(ThreadId t, RwRole role) { queue_.emplace_back(t, role); }

  void acquire(ThreadId t, RwRole role) {
    std::erase_if(queue_, [t](const auto& w) { return w.first == t; });
    if (role == RwRole::Reader)
      active_readers_.insert(std::upper_bound(active_readers_.begin(), active_readers_.end(), t), t);
    else {
      active_writer_ = t;
      writer_role_ = role;
    }
  }

  void release(ThreadId t) {
    if (active_writer_ == t)
      active_writer_.reset();
    else
      std::erase(active_readers_, t);
  }

  void serialize(std::string& out) const override {
    wire::put(out, active_writer_ ? index_of(*active_writer_) + 1ULL : 0ULL);
    wire::put(out, static_cast<std::uint64_t>(active_writer_ ? writer_role_ : RwRole::Reader));
    wire::put(out, static_cast<std::uint64_t>(active_readers_.size()));
    for (auto t : active_readers_) wire::put(out, static_cast<std::uint64_t>(index_of(t)));
    // Only no_pref looks at arrival order across roles; the others are
    // serialized role by role so that interleaved enqueues compare equal.
    wire::put(out, static_cast<std::uint64_t>(queue_.size()));
    auto put_waiter = [&](const std::pair<ThreadId, RwRole>& w) {
      wire::put(out, static_cast<std::uint64_t>(index_of(w.first)));
      wire::put(out, static_cast<std::uint64_t>(w.second));
    };
    if (preference_ == RwPreference::None) {
      for (const auto& w : queue_) put_waiter(w);
      return;
    }
    for (auto role : {RwRole::Reader, RwRole::Writer1, RwRole::Writer2})
      for (const auto& w : queue_)
        if (w.second == role) put_waiter(w);
  }

  std::string describe() const override {
    std::string out = "writer=" + (active_writer_ ? std::to_string(index_of(*active_writer_)) : std::string("none"));
    out += " readers=[";
    for (std::size_t i = 0; i < active_readers_.size(); ++i)
      out += (i ? " " : "") + std::to_string(index_of(active_readers_[i]));
    out += "] queue=[";
    for (std::size_t i = 0; i < queue_.size(); ++i)
      out += (i ? " " : "") + std::to_string(index_of(queue_[i].first)) + ":" + std::string(to_string(queue_[i].second));
    return out + "] " + std::string(to_string(preference_));
  }

 private:
  RwPreference preference_;
  std::optional<ThreadId> active_writer_;
  RwRole writer_role_ = RwRole::Writer1;
  std::vector<ThreadId> active_readers_;
  std::vector<std::pair<ThreadId, RwRole>> queue_;
};

using RWLockObj = RwObject<1>;
using RWWLockObj = RwObject<2>;

template <int WriterKinds>
class RwTransition : public Transition {
 public:
  RwTransition(ThreadId executor, ObjectId lock) : Transition(executor, lock) {}

  ObjectId lock() const { return *object(); }

 protected:
  bool same_lock(const Transition& other) const {
    auto* rw = as<RwTransition<WriterKinds>>(other);
    return rw != nullptr && rw->lock() == lock();
  }

  static constexpr const char* prefix() { return WriterKinds == 1 ? "rw" : "rww"; }
};

template <int WriterKinds>
class RwAcquire;

template <int WriterKinds>
class RwEnqueue final : public RwTransition<WriterKinds> {
 public:
  RwEnqueue(ThreadId executor, ObjectId lock, RwRole role, RwPreference preference)
      : RwTransition<WriterKinds>(executor, lock), role_(role), preference_(preference), kind_(make_kind(role)) {}

  std::string_view kind() const override { return kind_; }
  RwRole role() const noexcept { return role_; }

  bool enabled_in(const ModelState&) const override { return true; }

  // Appending a waiter never moves a queue front, so it only conflicts with
  // same-queue enqueues and with acquisitions gated on "someone of my role is
  // waiting". The lock's preference is fixed per object, so it's read off the
  // role pairing: readers gate writers under reader_pref and vice versa.
  bool dependent_with(const Transition& other) const override {
    if (!this->same_lock(other)) return false;
    if (auto* enq = as<RwEnqueue>(other)) return enq->role_ == role_ || preference_ == RwPreference::None;
    if (auto* acq = as<RwAcquire<WriterKinds>>(other)) {
      bool mine = role_ == RwRole::Reader;
      bool theirs = acq->is_reader();
      if (mine == theirs) return false;
      return mine ? preference_ == RwPreference::Reader : preference_ == RwPreference::Writer;
    }
    return false;
  }

 protected:
  void apply(ModelState& s) const override { s.edit<RwObject<WriterKinds>>(this->lock()).enqueue(this->executor(), role_); }

 private:
  static std::string make_kind(RwRole role) {
    std::string k = RwTransition<WriterKinds>::prefix();
    if (role == RwRole::Reader) return k + "_rd_enqueue";
    if (WriterKinds == 1) return k + "_wr_enqueue";
    return k + (role == RwRole::Writer1 ? "_wr1_enqueue" : "_wr2_enqueue");
  }

  RwRole role_;
  RwPreference preference_;
  std::string kind_;
};

template <int WriterKinds>
class RwAcquire final : public RwTransition<WriterKinds> {
 public:
  RwAcquire(ThreadId executor, ObjectId lock, RwRole role)
      : RwTransition<WriterKinds>(executor, lock), role_(role), kind_(make_kind(role)) {}

  std::string_view kind() const override { return kind_; }
  RwRole role() const noexcept { return role_; }
  bool is_reader() const noexcept { return role_ == RwRole::Reader; }

  bool enabled_in(const ModelState& s) const override {
    return s.get<RwObject<WriterKinds>>(this->lock()).can_acquire(this->executor(), role_);
  }

  // Two reader acquisitions commute; everything else on the lock conflicts.
  bool dependent_with(const Transition& other) const override {
    if (!this->same_lock(other)) return false;
    auto* acq = as<RwAcquire>(other);
    return !(acq && acq->is_reader() && is_reader());
  }

  // A reader and a writer acquisition of one lock are never both enabled.
  bool coenabled_with(const Transition& other) const override {
    auto* acq = as<RwAcquire>(other);
    if (acq == nullptr || !this->same_lock(other)) return true;
    return acq->is_reader() == is_reader();
  }

 protected:
  void apply(ModelState& s) const override {
    s.edit<RwObject<WriterKinds>>(this->lock()).acquire(this->executor(), role_);
  }

 private:
  static std::string make_kind(RwRole role) {
    std::string k = RwTransition<WriterKinds>::prefix();
    if (role == RwRole::Reader) return k + "_rdlock";
    if (WriterKinds == 1) return k + "_wrlock";
    return k + (role == RwRole::Writer1 ? "_wr1lock" : "_wr2lock");
  }

  RwRole role_;
  std::string kind_;
};

template <int WriterKinds>
class RwUnlock final : public RwTransition<WriterKinds> {
 public:
  using RwTransition<WriterKinds>::RwTransition;

  std::string_view kind() const override { return WriterKinds == 1 ? "rw_unlock" : "rww_unlock"; }

  bool enabled_in(const ModelState&) const override { return true; }

  // Releases touch only the holder sets, which enqueues and other releases
  // neither read nor change.
  bool dependent_with(const Transition& other) const override {
    return this->same_lock(other) && as<RwAcquire<WriterKinds>>(other) != nullptr;
  }

  std::optional<Finding> check(const ModelState& pre) const override {
    if (!pre.get<RwObject<WriterKinds>>(this->lock()).holds(this->executor()))
      return Finding{FindingKind::UsageError, "unlock of " + pre.object(this->lock()).name() + " by non-holder"};
    return std::nullopt;
  }

 protected:
  void apply(ModelState& s) const override { s.edit<RwObject<WriterKinds>>(this->lock()).release(this->executor()); }
};

}  // namespace permute
