#pragma once

namespace kgbench {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kgbench
