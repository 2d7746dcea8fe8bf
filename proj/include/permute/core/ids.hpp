#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

namespace permute {

// Dense, spawn-ordered thread identity. The implicit main thread is 0.
enum class ThreadId : std::uint32_t {};

// Identity of one visible object; allocated from program declaration order so
// it is stable across re-executions and across interleavings.
enum class ObjectId : std::uint32_t {};

inline constexpr ThreadId kMainThread{0};

constexpr std::uint32_t index_of(ThreadId t) noexcept { return static_cast<std::uint32_t>(t); }
constexpr std::uint32_t index_of(ObjectId o) noexcept { return static_cast<std::uint32_t>(o); }

inline std::ostream& operator<<(std::ostream& os, ThreadId t) { return os << index_of(t); }
inline std::ostream& operator<<(std::ostream& os, ObjectId o) { return os << '#' << index_of(o); }

}  // namespace permute
