#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace astar {

// 17 significant digits round-trip every double; '.' separator regardless of locale.
inline std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace astar
