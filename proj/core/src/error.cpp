#include "entrograph/error.hpp"

#include <sstream>

namespace entrograph {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::EmptyAttachments: return "EmptyAttachments";
    case ErrorCode::TooFewAttachments: return "TooFewAttachments";
    case ErrorCode::AdjacentVertices: return "AdjacentVertices";
    case ErrorCode::DisconnectedPair: return "DisconnectedPair";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DivergentSeries: return "DivergentSeries";
    case ErrorCode::InvalidDartIndex: return "InvalidDartIndex";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::HorizonTooLarge: return "HorizonTooLarge";
    case ErrorCode::MarginTooSmall: return "MarginTooSmall";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InfeasibleParameters: return "InfeasibleParameters";
    case ErrorCode::Precondition: return "Precondition";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {
std::string horizon_message(double requested, double safe, std::size_t cap) {
  std::ostringstream os;
  os << "enumeration to horizon " << requested << " exceeds the cap of " << cap
     << " walks; a safe horizon is " << safe;
  return os.str();
}
}  // namespace

HorizonError::HorizonError(double requested, double safe_horizon, std::size_t cap)
    : Error(ErrorCode::HorizonTooLarge, horizon_message(requested, safe_horizon, cap)),
      requested_(requested),
      safe_(safe_horizon) {}

}  // namespace entrograph
