#pragma once

#include <stdexcept>
#include <string>

namespace orbitlift {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteInput : public Error {
 public:
  using Error::Error;
};

class GroupMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NotInGroup : public Error {
 public:
  using Error::Error;
};

class DerivativeUnavailable : public Error {
 public:
  using Error::Error;
};

class InsufficientNodes : public Error {
 public:
  using Error::Error;
};

class ScheduleOverlap : public Error {
 public:
  using Error::Error;
};

class NotInImage : public Error {
 public:
  using Error::Error;
};

class UnknownEntry : public Error {
 public:
  using Error::Error;
};

class ConfigParse : public Error {
 public:
  using Error::Error;
};

class FileIO : public Error {
 public:
  using Error::Error;
};

/// Errors meaning the input curve is not liftable as given (CLI exit code 3).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Orbit rank differs between two grid points.
class RankDrift : public StructuralError {
 public:
  RankDrift(double t1, int r1, double t2, int r2);
  double t1, t2;
  int r1, r2;
};

/// The curve derivative has a component normal to the orbit above tolerance.
class NotTangent : public StructuralError {
 public:
  NotTangent(double t, double residual);
  double t;
  double residual;
};

/// Lift residual exceeded the abort threshold.
class ResidualBlowup : public StructuralError {
 public:
  ResidualBlowup(double t, double residual);
  double t;
  double residual;
};

}  // namespace orbitlift
