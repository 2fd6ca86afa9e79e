#pragma once

// Small text helpers shared by the file-format code. Fields never contain
// commas or quotes in any of the formats here, so splitting is plain.

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "irv/errors.h"

namespace irv::text {

inline std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

inline bool iequals(const std::string& a, const char* b) {
    size_t n = 0;
    for (; n < a.size() && b[n]; ++n)
        if (std::tolower(static_cast<unsigned char>(a[n])) !=
            std::tolower(static_cast<unsigned char>(b[n])))
            return false;
    return n == a.size() && b[n] == '\0';
}

inline long long parse_ll(const std::string& s, const std::string& what) {
    if (s.empty()) throw ParseError(what + ": empty number");
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) throw ParseError(what + ": bad integer '" + s + "'");
    return v;
}

inline double parse_double(const std::string& s, const std::string& what) {
    if (s.empty()) throw ParseError(what + ": empty number");
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ParseError(what + ": bad number '" + s + "'");
    return v;
}

}  // namespace irv::text
