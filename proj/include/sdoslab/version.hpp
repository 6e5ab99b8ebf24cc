#pragma once

namespace sdoslab {
inline constexpr const char* kVersion = "0.1.0";
}
