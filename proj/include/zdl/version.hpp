#pragma once

namespace zdl {

inline constexpr const char* kToolVersion = "zdl 0.9.0";

}  // namespace zdl
