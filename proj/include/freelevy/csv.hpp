#pragma once

// Locale-independent number formatting for CSV and report output.

#include <charconv>
#include <string>

namespace freelevy {

/// Shortest decimal string that reads back to the same double.
inline std::string num(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace freelevy
