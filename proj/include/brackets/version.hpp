#pragma once

namespace brackets {
inline constexpr const char* kVersion = "0.1.0";
}
