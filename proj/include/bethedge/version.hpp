#pragma once

namespace bethedge {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace bethedge
