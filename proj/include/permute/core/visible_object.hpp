#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

namespace permute {

namespace wire {

inline void put(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_signed(std::string& out, std::int64_t v) { put(out, static_cast<std::uint64_t>(v)); }
inline void put(std::string& out, std::string_view s) {
  put(out, static_cast<std::uint64_t>(s.size()));
  out.append(s);
}

}  // namespace wire

// Checker-side model of one synchronization object (mutex, semaphore, ...).
// Objects are created on the first operation naming them and then persist
// for the whole exploration.
class VisibleObject {
 public:
  explicit VisibleObject(std::string name) : name_(std::move(name)) {}
  virtual ~VisibleObject() = default;

  const std::string& name() const noexcept { return name_; }

  virtual std::string_view kind() const = 0;
  virtual std::shared_ptr<VisibleObject> clone() const = 0;
  // Canonical, total encoding of the object state.
  virtual void serialize(std::string& out) const = 0;
  virtual std::string describe() const = 0;

 private:
  std::string name_;
};

template <class Derived>
class ObjectBase : public VisibleObject {
 public:
  using VisibleObject::VisibleObject;

  std::shared_ptr<VisibleObject> clone() const override {
    return std::make_shared<Derived>(static_cast<const Derived&>(*this));
  }
};

}  // namespace permute
