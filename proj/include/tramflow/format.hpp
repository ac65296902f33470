#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace tramflow {

/// Renders `value` with 9 significant digits.
inline std::string fmt9(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

/// Rounds `value` to 9 significant digits, so that printing and re-parsing
/// reproduces it bit for bit.
inline double round9(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(fmt9(value).c_str(), nullptr);
}

}  // namespace tramflow
