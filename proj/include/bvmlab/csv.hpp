#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace bvmlab {

/// Floats print with 17 significant digits and a '.' decimal separator, so
/// values round-trip exactly and output never depends on the locale.
inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::optional<double>& v) {
  return v ? csv_double(*v) : std::string();
}

inline std::string csv_join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += fields[i];
  }
  out.push_back('\n');
  return out;
}

} // namespace bvmlab
