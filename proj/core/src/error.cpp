#include "csl/error.hpp"

namespace csl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::ConstraintViolation: return "constraint-violation";
    case ErrorCode::EmbeddingFailure: return "embedding-failure";
    case ErrorCode::DegenerateMetric: return "degenerate-metric";
    case ErrorCode::IterationLimit: return "iteration-limit";
    case ErrorCode::InvalidImmersion: return "invalid-immersion";
    case ErrorCode::RefinementNeeded: return "refinement-needed";
    case ErrorCode::PointAtInfinity: return "point-at-infinity";
    case ErrorCode::InvalidComparison: return "invalid-comparison";
    case ErrorCode::Parse: return "parse-error";
    case ErrorCode::Internal: return "internal-error";
  }
  return "unknown-error";
}

}  // namespace csl
