#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvcovh {

// Every failure surfaced by the library carries one of these kinds. The CLI
// serializes the kind name into its error JSON, so names are part of the
// external interface.
enum class ErrorKind {
  missing_file,
  row_count_mismatch,
  non_numeric_cell,
  empty_view,
  invalid_value,
  malformed_manifest,
  shape_mismatch,
  invalid_parameter,
  numerical_failure,
  undefined_result,
  missing_labels,
  io_failure,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace mvcovh
