#pragma once

namespace convoke {

inline constexpr const char* kVersion = "0.1.0";

} // namespace convoke
