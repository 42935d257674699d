#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace casimir {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(std::string name)
      : Error("unknown identifier '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

/// Sampled ranks of the structure matrix disagree across points.
class RankInstability : public Error {
 public:
  using Error::Error;
};

/// A degeneracy relation failed to certify (usually a misjudged rank).
class CertificationFailure : public Error {
 public:
  using Error::Error;
};

class IntegratingFactorNotFound : public Error {
 public:
  using Error::Error;
};

class AntiderivativeOutsideClass : public Error {
 public:
  using Error::Error;
};

/// Trajectory left the domain or the step size was too coarse.
class FlowError : public Error {
 public:
  using Error::Error;
};

}  // namespace casimir
