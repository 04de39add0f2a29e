#pragma once

namespace ngdbf {

inline constexpr const char* kVersion = "1.0.0";

} // namespace ngdbf
