/**
 * @file io.hpp
 * @brief Number formatting shared by CSV/JSON writers
 */
#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace clab {

/// 17 significant digits, enough for an exact double round trip.
inline std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace clab
