#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace lorentz {

enum class ErrorKind {
  SingularPoint,
  NonFinite,
  UnboundedAbove,
  PreconditionViolated,
  SingularTrajectory,
  BoundaryOfK,
  NoNonautonomousPoint,
  DegenerateOscillation,
  SpeedCapExceeded,
  CertificateFailed,
  EquilibriumStart,
  FlowStalled,
  ProjectionStalled,
  LineSearchFailed,
  AllStartsFailed,
  SingularEncounter,
  ConfigError,
  NotAdmissible,
};

const char* to_string(ErrorKind kind);

/// Compact "%.6g" rendering for error messages.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Every failure raised by the toolkit carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the integrator; `time()` is the time of closest approach to the
/// offending singular ball.
class SingularEncounterError : public Error {
 public:
  SingularEncounterError(const std::string& message, double time)
      : Error(ErrorKind::SingularEncounter, message), time_(time) {}

  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace lorentz
