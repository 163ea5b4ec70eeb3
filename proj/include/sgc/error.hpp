#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgc {

enum class ErrorCode {
  kEmptyInput,
  kSizeLimit,
  kIntegrity,
  kMissingEmbedding,
  kDegenerateVector,
  kEmptyGraph,
  kInvalidScore,
  kLoopGuard,
  kConfig,
  kValidation,
  kInput,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library carries a machine-readable code; the CLI
// maps codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sgc
