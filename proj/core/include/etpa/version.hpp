#pragma once

#include <string_view>

namespace etpa {

inline constexpr std::string_view tool_version = "0.1.0";

}  // namespace etpa
