#ifndef QCLAB_FORMAT_HPP
#define QCLAB_FORMAT_HPP

#include <cstdio>
#include <string>

namespace qclab {

/// Shortest-safe round-trip rendering: 17 significant digits.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace qclab

#endif  // QCLAB_FORMAT_HPP
