#pragma once

#include <cerrno>
#include <charconv>
#include <fstream>
#include <ostream>
#include <string>
#include <system_error>

namespace skewlab {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  return out;
}

inline void check_stream(const std::ostream& out, const std::string& what) {
  if (!out) throw std::system_error(std::make_error_code(std::errc::io_error), "write failed: " + what);
}

}  // namespace skewlab
