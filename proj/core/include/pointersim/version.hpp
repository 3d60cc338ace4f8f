#pragma once

namespace pointersim {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pointersim
