#pragma once

#include <stdexcept>
#include <string>

namespace spikelab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// precondition violations
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SingularBasis : public Error {
 public:
  using Error::Error;
};

class DimensionUnsupported : public Error {
 public:
  using Error::Error;
};

class Overflow : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class EnumerationTooLarge : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class InsufficientDepth : public Error {
 public:
  using Error::Error;
};

class NoDip : public Error {
 public:
  using Error::Error;
};

class EmptyIntersection : public Error {
 public:
  using Error::Error;
};

class ScaleOutOfRange : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spikelab
