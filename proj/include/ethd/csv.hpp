// Fixed-format CSV helpers so regression artifacts diff cleanly: stable
// column order, integer microsecond timestamps, fixed decimal places.

#ifndef ETHD_CSV_HPP
#define ETHD_CSV_HPP

#include <cstdio>
#include <string>

namespace ethd {

inline std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

// Schema version comment placed on the first line of every CSV artifact.
inline std::string csv_header_line(const std::string& schema) {
  return "# ethd-csv v1 " + schema + "\n";
}

}  // namespace ethd

#endif  // ETHD_CSV_HPP
