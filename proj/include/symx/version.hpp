#pragma once

namespace symx {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace symx
