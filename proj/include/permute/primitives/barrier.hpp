#pragma once

#include <cstdint>
#include <string>

#include "permute/core/model_state.hpp"
#include "permute/core/transition.hpp"

namespace permute {

// Single-use barrier: arrivals only count up, and waiting completes once the
// count reaches the number of parties.
class BarrierObj final : public ObjectBase<BarrierObj> {
 public:
  BarrierObj(std::string name, std::uint32_t parties) : ObjectBase(std::move(name)), parties_(parties) {}

  std::string_view kind() const override { return "barrier"; }

  std::uint32_t parties() const noexcept { return parties_; }
  std::uint32_t arrived() const noexcept { return arrived_; }
  bool open() const noexcept { return arrived_ >= parties_; }

  void arrive() { ++arrived_; }

  void serialize(std::string& out) const override {
    wire::put(out, static_cast<std::uint64_t>(parties_));
    wire::put(out, static_cast<std::uint64_t>(arrived_));
  }
  std::string describe() const override {
    return "arrived=" + std::to_string(arrived_) + "/" + std::to_string(parties_);
  }

 private:
  std::uint32_t parties_;
  std::uint32_t arrived_ = 0;
};

// Arrivals increment a counter and waits read a monotone threshold, so every
// order of same-barrier transitions reaches the same state.
class BarrierArrive final : public Transition {
 public:
  BarrierArrive(ThreadId executor, ObjectId barrier) : Transition(executor, barrier) {}

  std::string_view kind() const override { return "barrier_arrive"; }
  bool enabled_in(const ModelState&) const override { return true; }
  bool dependent_with(const Transition&) const override { return false; }

 protected:
  void apply(ModelState& s) const override { s.edit<BarrierObj>(*object()).arrive(); }
};

class BarrierWaitFinish final : public Transition {
 public:
  BarrierWaitFinish(ThreadId executor, ObjectId barrier) : Transition(executor, barrier) {}

  std::string_view kind() const override { return "barrier_wait"; }
  bool enabled_in(const ModelState& s) const override { return s.get<BarrierObj>(*object()).open(); }
  bool dependent_with(const Transition&) const override { return false; }
};

}  // namespace permute
