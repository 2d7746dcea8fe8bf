#pragma once

namespace permute {
inline constexpr const char* kVersion = "0.1.0";
}
