#include "eigenfeat/error.hpp"

namespace eigenfeat {

ErrorClass error_class(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_geometry:
    case ErrorCode::precondition:
      return ErrorClass::config;
    case ErrorCode::degenerate_input:
    case ErrorCode::non_convergence:
      return ErrorClass::numeric;
    default:
      return ErrorClass::data;
  }
}

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::invalid_geometry: return "invalid geometry";
    case ErrorCode::precondition: return "precondition violated";
    case ErrorCode::io: return "i/o failure";
    case ErrorCode::malformed_header: return "malformed header";
    case ErrorCode::truncated_payload: return "truncated payload";
    case ErrorCode::unsupported_maxval: return "unsupported maxval";
    case ErrorCode::value_out_of_range: return "value out of range";
    case ErrorCode::version_mismatch: return "version mismatch";
    case ErrorCode::corrupt_payload: return "corrupt payload";
    case ErrorCode::shape_mismatch: return "shape mismatch";
    case ErrorCode::missing_file: return "missing file";
    case ErrorCode::ordering_failed: return "class ordering not achieved";
    case ErrorCode::degenerate_input: return "degenerate input";
    case ErrorCode::non_convergence: return "non-convergence";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace eigenfeat
