#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eigenfeat {

/// Failure categories. Each maps onto one of three coarse classes (config,
/// data, numeric) that the command line tool turns into exit codes.
enum class ErrorCode {
  // configuration / usage
  invalid_argument,
  invalid_geometry,
  precondition,
  // data and file formats
  io,
  malformed_header,
  truncated_payload,
  unsupported_maxval,
  value_out_of_range,
  version_mismatch,
  corrupt_payload,
  shape_mismatch,
  missing_file,
  ordering_failed,
  // numerics
  degenerate_input,
  non_convergence,
};

enum class ErrorClass { config, data, numeric };

ErrorClass error_class(ErrorCode code) noexcept;
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  ErrorClass error_class() const noexcept { return eigenfeat::error_class(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace eigenfeat
