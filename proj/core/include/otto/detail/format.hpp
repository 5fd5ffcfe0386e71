#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace otto::detail {

// Round-trip safe decimal rendering (17 significant digits).
inline std::string fmt17(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
    return buf;
}

} // namespace otto::detail
