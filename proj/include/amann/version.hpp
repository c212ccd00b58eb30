#pragma once

namespace amann {

inline constexpr const char* kToolName = "amann";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace amann
