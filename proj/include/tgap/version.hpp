#pragma once

namespace tgap {

inline constexpr const char* project_name = "traction-gap";
inline constexpr const char* project_version = "1.0.0";

}  // namespace tgap
