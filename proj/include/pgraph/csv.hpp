#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "pgraph/floquet.hpp"
#include "pgraph/spectral_analysis.hpp"

namespace pgraph {

// Shortest form that round-trips a double: 17 significant digits.
inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_dispersion_csv(std::ostream& os, const DispersionTable& t) {
  for (std::size_t s = 1; s <= t.dimension; ++s) os << (s > 1 ? "," : "") << 'k' << s;
  for (std::size_t j = 1; j <= t.bands; ++j) os << ",lambda_" << j;
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_real(row[i]);
    os << '\n';
  }
}

inline void write_convergence_csv(std::ostream& os, const ConvergenceStudy& st) {
  os << "t_norm,direct,predicted,residual\n";
  for (const auto& r : st.rows)
    os << format_real(r.t_norm) << ',' << format_real(r.direct) << ',' << format_real(r.predicted) << ','
       << format_real(r.residual) << '\n';
}

}  // namespace pgraph
