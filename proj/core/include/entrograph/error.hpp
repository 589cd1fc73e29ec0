#pragma once

#include <stdexcept>
#include <string>

namespace entrograph {

enum class ErrorCode {
  InvalidGraph,
  UnknownVertex,
  NonPositiveLength,
  EmptyAttachments,
  TooFewAttachments,
  AdjacentVertices,
  DisconnectedPair,
  NonConvergence,
  DivergentSeries,
  InvalidDartIndex,
  InsufficientData,
  HorizonTooLarge,
  MarginTooSmall,
  UnknownFormat,
  ParseError,
  InfeasibleParameters,
  Precondition,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries an ErrorCode so callers
/// (notably the CLI) can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by enumeration when the walk count would exceed the configured cap.
class HorizonError : public Error {
 public:
  HorizonError(double requested, double safe_horizon, std::size_t cap);

  double requested() const noexcept { return requested_; }
  /// A horizon for which the same enumeration is guaranteed to stay under the cap.
  double safe_horizon() const noexcept { return safe_; }

 private:
  double requested_;
  double safe_;
};

}  // namespace entrograph
