#pragma once

namespace prosogate {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace prosogate
