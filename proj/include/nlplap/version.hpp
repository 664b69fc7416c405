#pragma once

namespace nlplap {

inline constexpr const char* kVersion = "0.1.0";

// Generator identity recorded in run manifests; see rng.hpp.
inline constexpr const char* kRngName = "splitmix64";

}  // namespace nlplap
