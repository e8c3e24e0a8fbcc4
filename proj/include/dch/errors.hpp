#pragma once

#include <stdexcept>
#include <string>

namespace dch {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NewtonDivergence : public Error {
 public:
  using Error::Error;
};

class StepSizeUnderflow : public Error {
 public:
  using Error::Error;
};

class NoInteriorMinimum : public Error {
 public:
  using Error::Error;
};

class NonPositiveData : public Error {
 public:
  using Error::Error;
};

class NoCrossing : public Error {
 public:
  using Error::Error;
};

class PlateauNotReached : public Error {
 public:
  using Error::Error;
};

class Overflow : public Error {
 public:
  using Error::Error;
};

class TrivialBranch : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NegativeExcursion : public Error {
 public:
  using Error::Error;
};

class InconsistentMatching : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dch
