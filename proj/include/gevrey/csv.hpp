#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace gevrey {

/// Fixed, locale-independent rendering so identical runs give identical bytes.
inline std::string csv_number(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12e", v);
  return buffer;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

}  // namespace gevrey
