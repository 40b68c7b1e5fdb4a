#pragma once

namespace tailproc {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace tailproc
