#pragma once

#include <stdexcept>
#include <string>

#include "resonwave/types.hpp"

namespace resonwave {

/// Root of all library exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: invalid parameters, grids that are too small, states outside
/// the operator domain. The CLI maps these to exit code 2.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Config document problem, carrying a JSON-pointer-like field path.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string path, std::string reason)
      : InvalidArgument(path.empty() ? reason : path + ": " + reason),
        path_(std::move(path)),
        reason_(std::move(reason)) {}
  const std::string& path() const { return path_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

/// Numerical failures. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class PoleProximity : public NumericalError {
 public:
  explicit PoleProximity(cplx lambda)
      : NumericalError("evaluation point too close to a pole of the resolvent"),
        lambda_(lambda) {}
  cplx lambda() const { return lambda_; }

 private:
  cplx lambda_;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BoundaryZero : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OnCurve : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonSimpleDerivative : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationNotConverged : public NumericalError {
 public:
  TruncationNotConverged(const std::string& what, double last_increment)
      : NumericalError(what), last_increment_(last_increment) {}
  double last_increment() const { return last_increment_; }

 private:
  double last_increment_;
};

}  // namespace resonwave
