#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geodesic.hpp"
#include "metric.hpp"

namespace splitgeo {

inline constexpr const char* kTrajectoryHeader = "s,x0,x1,x2,x3,p0,p1,p2,p3,H";

// 17 significant digits: enough for doubles to re-parse bit-exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_trajectory_csv(std::ostream& os, const SplitMetric& m,
                                 const GeodesicPath& path) {
    os << kTrajectoryHeader << '\n';
    for (const auto& st : path.samples) {
        os << format_double(st.s);
        for (double c : st.x) os << ',' << format_double(c);
        for (double c : st.p) os << ',' << format_double(c);
        os << ',' << format_double(hamiltonian(m, st).first) << '\n';
    }
}

struct TrajectoryRow {
    double s;
    Vec4 x;
    Vec4 p;
    double H;
};

inline std::vector<TrajectoryRow> read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kTrajectoryHeader)
        throw ParseError("trajectory CSV header mismatch");
    std::vector<TrajectoryRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::array<double, 10> vals{};
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int i = 0; i < 10; ++i) {
            auto [next, ec] = std::from_chars(p, end, vals[i]);
            if (ec != std::errc{}) throw ParseError("bad CSV number in: " + line);
            p = next;
            if (i < 9) {
                if (p == end || *p != ',') throw ParseError("bad CSV row: " + line);
                ++p;
            }
        }
        rows.push_back({vals[0],
                        {vals[1], vals[2], vals[3], vals[4]},
                        {vals[5], vals[6], vals[7], vals[8]},
                        vals[9]});
    }
    return rows;
}

} // namespace splitgeo
