#include "plc/errors.hpp"

#include <cstdio>

namespace plc {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidCoefficients: return "InvalidCoefficients";
    case ErrorCode::CompatibilityViolation: return "CompatibilityViolation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NonpositivePQ: return "NonpositivePQ";
    case ErrorCode::HorizonNotReached: return "HorizonNotReached";
    case ErrorCode::CuspAtRobinBoundary: return "CuspAtRobinBoundary";
    case ErrorCode::LookupMiss: return "LookupMiss";
    case ErrorCode::NonpositiveTimeGap: return "NonpositiveTimeGap";
    case ErrorCode::WindowUnderResolved: return "WindowUnderResolved";
    case ErrorCode::FixedPointDiverged: return "FixedPointDiverged";
    case ErrorCode::WindowCollapsed: return "WindowCollapsed";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::BlowupDetected: return "BlowupDetected";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  return code == ErrorCode::InvalidArgument || code == ErrorCode::InvalidCoefficients ||
         code == ErrorCode::CompatibilityViolation || code == ErrorCode::ConfigError;
}

namespace {
std::string compose(ErrorCode code, const std::string& module, const std::string& message,
                    double time) {
  std::string s = error_name(code);
  s += " [" + module + "]";
  if (time >= 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " at t=%.6g", time);
    s += buf;
  }
  if (!message.empty()) s += ": " + message;
  return s;
}
}  // namespace

Error::Error(ErrorCode code, std::string module, const std::string& message, double time)
    : std::runtime_error(compose(code, module, message, time)),
      code_(code),
      module_(std::move(module)),
      time_(time) {}

}  // namespace plc
