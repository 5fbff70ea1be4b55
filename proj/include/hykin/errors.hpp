#pragma once

#include <stdexcept>
#include <string>

namespace hykin {

/// Base class of every error raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A macroscopic state that is not physical (rho <= 0 or T <= 0).
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its admissible range (e.g. beta >= 1, n > 6).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent setup detected before stepping (CFL, wall data, mesh).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A step produced an invalid state; the caller may retry with a smaller dt.
class TimeStepFailure : public Error {
 public:
  TimeStepFailure(const std::string& what, long step = -1, int cell = -1)
      : Error(what), step_(step), cell_(cell) {}

  long step() const { return step_; }
  int cell() const { return cell_; }

 private:
  long step_;
  int cell_;
};

}  // namespace hykin
