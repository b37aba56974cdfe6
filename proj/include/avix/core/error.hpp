#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace avix {

enum class ErrorCode {
  kParse,
  kDanglingReference,
  kParameter,
  kDomain,
  kUnsupportedPair,
  kIo,
  kDegenerateSample,
  kMetricUndefined,
  kDependency,
  kValidation,
  kUnassignedLane,
  kPrecondition,
  kConfig,
  kInternal,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. The C API maps `code()` onto its
// status values and the CLI onto process exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace avix
