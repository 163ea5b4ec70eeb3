#include "sgc/error.hpp"

namespace sgc {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kSizeLimit: return "size_limit";
    case ErrorCode::kIntegrity: return "integrity";
    case ErrorCode::kMissingEmbedding: return "missing_embedding";
    case ErrorCode::kDegenerateVector: return "degenerate_vector";
    case ErrorCode::kEmptyGraph: return "empty_graph";
    case ErrorCode::kInvalidScore: return "invalid_score";
    case ErrorCode::kLoopGuard: return "loop_guard";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kInput: return "input";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace sgc
