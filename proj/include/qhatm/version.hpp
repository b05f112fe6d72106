#pragma once

namespace qhatm {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace qhatm
