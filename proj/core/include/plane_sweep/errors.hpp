#pragma once

#include <stdexcept>
#include <string>

namespace plane_sweep {

/// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical fault inside the Kepler iteration.
class KeplerNonConvergence : public Error {
 public:
  using Error::Error;
};

class InvalidElements : public Error {
 public:
  using Error::Error;
};

/// Two element sets that must share an epoch do not.
class EpochMismatch : public Error {
 public:
  using Error::Error;
};

enum class InfeasibleBound { FlybySpeed, CrossTrack, TooFewSatellites, Geometry };

/// The maneuver-free inspection strategy cannot satisfy the flyby limits for a plane.
class InfeasiblePlane : public Error {
 public:
  InfeasiblePlane(InfeasibleBound bound, const std::string& what) : Error(what), bound_(bound) {}
  [[nodiscard]] InfeasibleBound bound() const noexcept { return bound_; }

 private:
  InfeasibleBound bound_;
};

/// An offset coefficient (k_i, k_omega) outside [-1, 1].
class InvalidCoefficient : public Error {
 public:
  using Error::Error;
};

class TargetUnreachable : public Error {
 public:
  using Error::Error;
};

class ScheduleMismatch : public Error {
 public:
  using Error::Error;
};

/// Parse failure carrying the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  [[nodiscard]] int line() const noexcept { return line_; }

 private:
  int line_;
};

class MalformedLine : public ParseError {
 public:
  using ParseError::ParseError;
};

class MissingMissionKey : public Error {
 public:
  using Error::Error;
};

}  // namespace plane_sweep
