#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace imclass {

// Shortest decimal form that parses back to the identical double. Always
// uses '.' regardless of locale.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
    double out = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::runtime_error("malformed number: '" + std::string(text) + "'");
    return out;
}

inline long long parse_int(std::string_view text) {
    long long out = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::runtime_error("malformed integer: '" + std::string(text) + "'");
    return out;
}

}  // namespace imclass
