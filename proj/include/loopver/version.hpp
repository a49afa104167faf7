#pragma once

namespace loopver {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace loopver
