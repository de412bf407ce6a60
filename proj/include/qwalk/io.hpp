#pragma once
// Serialization helpers shared by the command-line tool and the tests:
// deterministic number formatting, text/graymap file output, and the flat
// key=value run-configuration format.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qwalk/slm.hpp"

namespace qwalk {

// Fixed shortest-round-trip-ish formatting (12 significant digits) so that
// identical runs serialize byte-identically across platforms and locales.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write: " + path);
}

// 8-bit binary graymap of a phase mask, phases mapped linearly [0,2*pi)->[0,255].
inline std::string pgm_bytes(const PhaseMask& mask) {
    std::string s = "P5\n" + std::to_string(mask.cols) + " " + std::to_string(mask.rows) + "\n255\n";
    s.reserve(s.size() + mask.pixels.size());
    for (double p : mask.pixels) {
        long g = std::lround(p / (2.0 * kPi) * 255.0);
        s.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(g, 0l, 255l))));
    }
    return s;
}

// Flat key=value configuration: one pair per line, '#' comments, blank lines
// skipped, whitespace around key and value trimmed. Anything else is an error.
inline std::map<std::string, std::string> parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r";
        const auto a = s.find_first_not_of(ws);
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(ws);
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = trim(t.substr(eq + 1));
    }
    return kv;
}

inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    return parse_config(in);
}

}  // namespace qwalk
