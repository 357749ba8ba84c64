#pragma once

#include <stdexcept>
#include <string>

namespace plc {

/// Error categories shared by every module. The numeric values are the
/// ones exposed through the C API (see plc.h).
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  InvalidCoefficients = 2,
  CompatibilityViolation = 3,
  ConfigError = 4,
  QuadratureFailure = 10,
  NonpositivePQ = 11,
  HorizonNotReached = 12,
  CuspAtRobinBoundary = 13,
  LookupMiss = 14,
  NonpositiveTimeGap = 20,
  WindowUnderResolved = 21,
  FixedPointDiverged = 30,
  WindowCollapsed = 31,
  CFLViolation = 40,
  BlowupDetected = 41,
  IoError = 50,
  Internal = 99,
};

const char* error_name(ErrorCode code);

/// True for codes that come from bad input rather than a failed solve.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, const std::string& message, double time = -1.0);

  ErrorCode code() const { return code_; }
  const std::string& module() const { return module_; }
  /// Simulation time at which the failure happened, or -1 if not applicable.
  double time() const { return time_; }

 private:
  ErrorCode code_;
  std::string module_;
  double time_;
};

}  // namespace plc
