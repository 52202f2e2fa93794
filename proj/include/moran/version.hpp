#pragma once

namespace moran {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace moran
