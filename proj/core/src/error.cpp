#include "ranplan/error.hpp"

namespace ranplan {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::index_out_of_range: return "index_out_of_range";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::invalid_decision: return "invalid_decision";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::cap_exceeded: return "cap_exceeded";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::config_error: return "config_error";
  }
  return "unknown";
}

}  // namespace ranplan
