#pragma once

#include <stdexcept>
#include <string>

namespace freqlab {

// Every failure raised by the library derives from Error so callers (the
// harness in particular) can record a stage failure without knowing the kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (t >= 0, n = 3, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input is identically zero or otherwise carries no information.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// A sampled value came out NaN or infinite.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// The discretization cannot represent the requested quantity.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, double admissible_dt)
      : Error(what), admissible_dt_(admissible_dt) {}
  double admissible_dt() const noexcept { return admissible_dt_; }

 private:
  double admissible_dt_;
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double last_good_time)
      : Error(what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

// A documented precondition of a routine does not hold.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double measured)
      : Error(what), measured_(measured) {}
  double measured() const noexcept { return measured_; }

 private:
  double measured_;
};

class NotConvergedError : public Error {
 public:
  NotConvergedError(const std::string& what, double spread)
      : Error(what), spread_(spread) {}
  double spread() const noexcept { return spread_; }

 private:
  double spread_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace freqlab
