// Exception hierarchy shared by the isoswarm library and CLI.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace isoswarm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Apex coincides with the ellipsoid center, zero-length direction, etc.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid constant or option (non-positive rate, malformed interval, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class EmptySetError : public Error {
 public:
  using Error::Error;
};

// Contraction constants fail the rate-matrix condition.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

// Requested time lies beyond the last sample of a noise profile.
class ExtrapolationError : public Error {
 public:
  using Error::Error;
};

// Target success probability cannot be certified by the bound.
class UnattainableError : public Error {
 public:
  using Error::Error;
};

class ObjectiveDomainError : public Error {
 public:
  ObjectiveDomainError(const std::string& what, std::vector<double> point)
      : Error(what), point_(std::move(point)) {}
  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace isoswarm
