#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>

namespace natanzon {

// All numeric output funnels through one formatter so runs are byte-identical.
inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void csv_header(std::ostream& os, std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
        if (!first) os << ',';
        os << c;
        first = false;
    }
    os << '\n';
}

inline void csv_row(std::ostream& os, std::initializer_list<double> vals) {
    bool first = true;
    for (double v : vals) {
        if (!first) os << ',';
        os << fmt_g(v);
        first = false;
    }
    os << '\n';
}

}  // namespace natanzon
