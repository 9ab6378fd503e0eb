#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

namespace courtmetrics::detail {

using ordered_json = nlohmann::ordered_json;

/// Round to 9 significant decimal digits. Output artifacts pass every float
/// through this so serialized numbers are short, stable decimals.
inline double round9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::strtod(buf, nullptr);
}

inline std::string format9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace courtmetrics::detail
