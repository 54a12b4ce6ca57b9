#pragma once

#include <string_view>

namespace cqnc {

inline constexpr std::string_view tool_name = "cqnc";
inline constexpr std::string_view tool_version = "1.0.0";

}  // namespace cqnc
