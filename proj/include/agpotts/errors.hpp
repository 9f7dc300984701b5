#pragma once

#include <stdexcept>
#include <string>

namespace agpotts {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Cholesky pivot was non-positive. The usual cause is a shift that is too
// small; callers escalate the jitter.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class InvalidWeight : public Error {
 public:
  using Error::Error;
};

class DegenerateGraph : public Error {
 public:
  using Error::Error;
};

// Exact enumeration would exceed the configured state-count guard.
class TooLarge : public Error {
 public:
  using Error::Error;
};

class WrongStateCount : public Error {
 public:
  using Error::Error;
};

class NegativeCoupling : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroVariance : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace agpotts
