#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "arithdyn/dynsys/orbit.hpp"

namespace arithdyn::io {

/// Seventeen significant digits: enough to round-trip a double.
inline std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Houses are exact integers while the entry holds exact coordinates of at
/// most house_bits bits; otherwise the cell is "exp(<log house>)".
inline std::string houses_cell(const OrbitEntry& e, std::size_t house_bits) {
    std::string out;
    auto hs = exact_houses(e, house_bits);
    for (std::size_t i = 0; i < e.log_houses.size(); ++i) {
        if (i) out += ';';
        out += hs ? (*hs)[i].get_str() : "exp(" + fmt_double(to_double(e.log_houses[i].mid())) + ")";
    }
    return out;
}

inline std::string intervals_mid_cell(const std::vector<RationalInterval>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += fmt_double(to_double(v[i].mid()));
    }
    return out;
}

inline std::string intervals_radius_cell(const std::vector<RationalInterval>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += fmt_double(to_double(v[i].width() / 2));
    }
    return out;
}

/// One row per entry: n, houses, h, h_plus, h_radius. Multi-factor and
/// multi-class cells are ';'-separated; h and h_plus are interval midpoints
/// and h_radius their common half-width.
inline void write_orbit_csv(std::ostream& os, const OrbitRecord& r, std::size_t house_bits = 128) {
    os << "n,houses,h,h_plus,h_radius\n";
    for (const auto& e : r.entries)
        os << e.n << ',' << houses_cell(e, house_bits) << ',' << intervals_mid_cell(e.heights) << ','
           << intervals_mid_cell(e.h_plus) << ',' << intervals_radius_cell(e.heights) << '\n';
}

} // namespace arithdyn::io
