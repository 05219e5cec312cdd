#pragma once

namespace rmcpd {

inline constexpr const char* version = "0.1.0";

}  // namespace rmcpd
