#pragma once

namespace esym {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace esym
