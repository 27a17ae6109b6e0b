#pragma once

#include <stdexcept>
#include <string>

namespace zeno {

// Base of every failure raised by the library. Callers that only need to
// report a message can catch this; the subclasses name the failed contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NotPositive : public Error {
 public:
  using Error::Error;
};

class InvalidProjection : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class UnsupportedState : public Error {
 public:
  using Error::Error;
};

class InvalidMeasure : public Error {
 public:
  using Error::Error;
};

class QuadratureBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class PrecisionLoss : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class MalformedCsv : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace zeno
