#pragma once

namespace corrma {

inline constexpr const char* kVersion = "corrma 0.1.0";

}  // namespace corrma
