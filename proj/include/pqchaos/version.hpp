#pragma once

namespace pqchaos {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pqchaos
