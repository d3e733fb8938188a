#pragma once

namespace pmqkd {
inline constexpr const char* kVersion = "0.1.0";
}
