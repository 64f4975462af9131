#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ranplan {

enum class ErrorCode {
  invalid_argument,
  index_out_of_range,
  dimension_mismatch,
  invalid_decision,
  parse_error,
  io_error,
  cap_exceeded,
  divergence,
  config_error,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure the library reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ranplan
