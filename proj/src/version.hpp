#pragma once

namespace omb {

inline constexpr const char kVersion[] = "1.0.0";

}  // namespace omb
