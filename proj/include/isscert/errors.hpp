#pragma once

#include <stdexcept>
#include <string>

namespace isscert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (negative level, NaN, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Wrong comparison-function class for the requested operation.
class ClassError : public Error {
 public:
  using Error::Error;
};

// Query outside the representable range (bounded K inverse, grid overrun).
class RangeError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double last_valid_time = 0.0)
      : Error(what), last_valid_time_(last_valid_time) {}
  double last_valid_time() const { return last_valid_time_; }

 private:
  double last_valid_time_;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

// Throws DomainError unless r is finite and nonnegative.
void require_level(double r, const char* what);

}  // namespace isscert
