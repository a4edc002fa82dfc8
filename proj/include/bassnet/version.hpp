#pragma once

#define BASSNET_VERSION_MAJOR 1
#define BASSNET_VERSION_MINOR 0
#define BASSNET_VERSION_PATCH 0
#define BASSNET_VERSION "1.0.0"

namespace bassnet {
inline constexpr const char* version() { return BASSNET_VERSION; }
} // namespace bassnet
