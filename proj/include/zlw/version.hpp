#pragma once

namespace zlw {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace zlw
