#pragma once

namespace ccrlink {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ccrlink
