#pragma once

namespace topsig {

inline constexpr const char* kVersion = "0.1.0";

} // namespace topsig
