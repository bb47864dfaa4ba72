#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csl {

enum class ErrorCode {
  InvalidParameter,
  ConstraintViolation,
  EmbeddingFailure,
  DegenerateMetric,
  IterationLimit,
  InvalidImmersion,
  RefinementNeeded,
  PointAtInfinity,
  InvalidComparison,
  Parse,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code tells callers (the CLI in
/// particular) which class of failure occurred without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures that come out of numerics rather than bad input.
  bool is_numeric() const noexcept {
    return code_ == ErrorCode::DegenerateMetric || code_ == ErrorCode::IterationLimit ||
           code_ == ErrorCode::RefinementNeeded || code_ == ErrorCode::EmbeddingFailure ||
           code_ == ErrorCode::PointAtInfinity || code_ == ErrorCode::Internal;
  }

 private:
  ErrorCode code_;
};

/// Iteration-limit failures carry the last residual so callers can report it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(ErrorCode::IterationLimit, what + " (residual " + std::to_string(residual) +
                                             " after " + std::to_string(iterations) +
                                             " iterations)"),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Raised when a mesh is too coarse for a requested deformation.
class RefinementError : public Error {
 public:
  RefinementError(const std::string& what, double required_edge_length)
      : Error(ErrorCode::RefinementNeeded,
              what + " (required edge length <= " + std::to_string(required_edge_length) + ")"),
        required_edge_length_(required_edge_length) {}

  double required_edge_length() const noexcept { return required_edge_length_; }

 private:
  double required_edge_length_;
};

}  // namespace csl
