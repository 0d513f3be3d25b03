#include "mvcovh/error.hpp"

namespace mvcovh {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::missing_file: return "missing_file";
    case ErrorKind::row_count_mismatch: return "row_count_mismatch";
    case ErrorKind::non_numeric_cell: return "non_numeric_cell";
    case ErrorKind::empty_view: return "empty_view";
    case ErrorKind::invalid_value: return "invalid_value";
    case ErrorKind::malformed_manifest: return "malformed_manifest";
    case ErrorKind::shape_mismatch: return "shape_mismatch";
    case ErrorKind::invalid_parameter: return "invalid_parameter";
    case ErrorKind::numerical_failure: return "numerical_failure";
    case ErrorKind::undefined_result: return "undefined_result";
    case ErrorKind::missing_labels: return "missing_labels";
    case ErrorKind::io_failure: return "io_failure";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace mvcovh
