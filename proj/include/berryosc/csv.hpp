#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace berryosc {

// Fixed numeric formatting for all CSV output: 15 significant digits,
// printf %.15g, so identical invocations are byte-identical.
inline std::string format_g15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

// One CSV row of doubles, LF-terminated.
template <typename... Ts>
void csv_row(std::ostream& os, Ts... fields) {
  bool first = true;
  ((os << (first ? (first = false, "") : ",") << format_g15(double(fields))), ...);
  os << '\n';
}

}  // namespace berryosc
