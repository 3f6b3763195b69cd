#pragma once

#define ROTSHIELD_VERSION_MAJOR 0
#define ROTSHIELD_VERSION_MINOR 1
#define ROTSHIELD_VERSION_PATCH 0

namespace rotshield {

inline constexpr const char* version_string = "0.1.0";

} // namespace rotshield
