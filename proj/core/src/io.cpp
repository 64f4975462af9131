#include "ranplan/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ranplan/error.hpp"

namespace ranplan {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  if (token == "inf") return INFINITY;
  if (token == "-inf") return -INFINITY;
  if (token == "nan") return NAN;
  double v = 0.0;
  const auto* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw Error(ErrorCode::parse_error, "not a number: '" + std::string(token) + "'");
  }
  return v;
}

long long parse_int(std::string_view token) {
  long long v = 0;
  const auto* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw Error(ErrorCode::parse_error, "not an integer: '" + std::string(token) + "'");
  }
  return v;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::io_error, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::io_error, "cannot write " + path.string());
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(ErrorCode::io_error, "write failed for " + path.string());
  }
}

}  // namespace ranplan
