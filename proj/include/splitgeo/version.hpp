#pragma once

namespace splitgeo {

inline constexpr const char* kVersion = "0.1.0";

} // namespace splitgeo
