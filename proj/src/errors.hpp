#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  empty_input,
  non_finite_value,
  parse_error,
  ragged_rows,
  label_not_binary,
  degenerate_labels,
  not_a_probability,
  negative_entry,
  no_threshold,
  io_error,
  corrupt_file,
  version_mismatch,
};

/// All failures surface as this exception; the code maps 1:1 onto the
/// C API status values so messages survive the language boundary intact.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace aniso
