#pragma once

// Locale-independent number formatting for CSV and report output.

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace issglf {

/// Shortest round-trip decimal form; "inf"/"-inf"/"nan" for non-finite values.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

/// Fixed-precision scientific form for human-readable reports.
inline std::string format_sci(double v, int digits = 6) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, digits);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace issglf
