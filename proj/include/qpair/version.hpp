#pragma once

namespace qpair {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qpair
