#pragma once

#include <openssl/evp.h>

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "permute/core/error.hpp"
#include "permute/core/model_state.hpp"
#include "permute/core/visible_object.hpp"

namespace permute {

struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  auto operator<=>(const Digest&) const = default;

  std::string hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
      out.push_back(kDigits[b >> 4]);
      out.push_back(kDigits[b & 0xf]);
    }
    return out;
  }
};

inline Digest sha256(const std::string& data) {
  Digest d;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) != 1 || len != d.bytes.size())
    throw Error("sha256 failed");
  return d;
}

// Canonical encoding: objects by id, threads by id, variables and spurious
// counters by key. Maps are ordered, so insertion order never leaks in.
inline std::string canonical_bytes(const ModelState& s) {
  std::string out;
  wire::put(out, static_cast<std::uint64_t>(s.objects().size()));
  for (const auto& [id, obj] : s.objects()) {
    wire::put(out, static_cast<std::uint64_t>(index_of(id)));
    wire::put(out, obj->kind());
    obj->serialize(out);
  }
  wire::put(out, static_cast<std::uint64_t>(s.thread_count()));
  for (std::uint32_t i = 0; i < s.thread_count(); ++i) {
    const ThreadRecord& rec = s.thread(ThreadId{i});
    wire::put(out, static_cast<std::uint64_t>(rec.exited));
    wire::put(out, static_cast<std::uint64_t>(rec.executed));
    wire::put(out, rec.pending ? rec.pending->label() : std::string("<none>"));
  }
  wire::put(out, static_cast<std::uint64_t>(s.vars().size()));
  for (const auto& [name, value] : s.vars()) {
    wire::put(out, name);
    wire::put_signed(out, value);
  }
  wire::put(out, static_cast<std::uint64_t>(s.spurious_counts().size()));
  for (const auto& [id, n] : s.spurious_counts()) {
    wire::put(out, static_cast<std::uint64_t>(index_of(id)));
    wire::put(out, static_cast<std::uint64_t>(n));
  }
  return out;
}

inline Digest fingerprint(const ModelState& s) { return sha256(canonical_bytes(s)); }

}  // namespace permute
