#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

#include "hhlab/error.hpp"

namespace hhlab {

/// Formats a double with 17 significant digits so that parse_real recovers
/// it bit for bit. Infinities print as "inf" / "-inf".
inline std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Parses a whole string as a double. Accepts the forms produced by
/// format_real plus "+inf". Trailing garbage is rejected.
inline double parse_real(std::string_view text) {
    std::string s(text);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t start = s.find_first_not_of(" \t");
    if (start == std::string::npos) throw UsageError("expected a number, got empty text");
    s.erase(0, start);
    if (s == "inf" || s == "+inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
        throw UsageError("not a number: '" + s + "'");
    if (!std::isfinite(v) || errno == ERANGE) {
        if (std::isfinite(v) && v != 0.0) return v;  // subnormal result
        if (!std::isfinite(v)) throw UsageError("number out of range: '" + s + "'");
    }
    return v;
}

}  // namespace hhlab
