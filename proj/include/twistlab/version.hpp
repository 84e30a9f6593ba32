#pragma once

namespace twistlab {

inline constexpr const char* kToolName = "twistlab";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace twistlab
