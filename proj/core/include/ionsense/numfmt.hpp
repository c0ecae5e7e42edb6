#pragma once

#include <cstdio>
#include <string>

namespace ionsense::util {

/// Shortest-ish decimal form with 15 significant digits. This is the numeric
/// format of every CSV column; values round-trip through strtod at that
/// precision.
inline std::string format_g15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline std::string format_g(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

}  // namespace ionsense::util
