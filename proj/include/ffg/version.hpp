#pragma once

namespace ffg {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ffg
