#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "fbmou/analysis.hpp"
#include "fbmou/simulate.hpp"

namespace fbmou {

/// Decimal with 17 significant digits, round-trippable in double precision.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_error_csv(std::ostream& os, const std::vector<ErrorRecord>& records) {
    os << "H,m,n,r,T,abs_error,rel_error\n";
    for (const auto& rec : records) {
        os << format_double(rec.H) << ',' << rec.m << ',' << rec.n << ','
           << format_double(rec.r) << ',' << format_double(rec.T) << ','
           << format_double(rec.abs_error) << ',' << format_double(rec.rel_error) << '\n';
    }
}

/// Long-format path output: one row per (path, time).
inline void write_paths_csv(std::ostream& os, const LiftPathBatch& batch) {
    os << "path,t,whn\n";
    for (int p = 0; p < batch.whn.rows(); ++p)
        for (size_t i = 0; i < batch.times.size(); ++i)
            os << p << ',' << format_double(batch.times[i]) << ','
               << format_double(batch.whn(p, int(i))) << '\n';
}

}  // namespace fbmou
