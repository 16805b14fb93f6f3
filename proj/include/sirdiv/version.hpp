#pragma once

namespace sirdiv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sirdiv
