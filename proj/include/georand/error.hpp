#pragma once

#include <stdexcept>
#include <string>

namespace georand {

enum class ErrorCode {
  invalid_argument,
  degenerate_input,
  duplicate_point,
  out_of_bounds,
  insufficient_data,
  length_mismatch,
  unsupported_format,
  bad_header,
  dimension_overflow,
  truncated_payload,
  io_error,
};

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace georand
