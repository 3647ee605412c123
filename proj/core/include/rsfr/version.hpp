#pragma once

#define RSFR_VERSION_MAJOR 0
#define RSFR_VERSION_MINOR 1
#define RSFR_VERSION_PATCH 0

namespace rsfr {

inline constexpr const char* version_string = "0.1.0";

}  // namespace rsfr
