#pragma once

#include <stdexcept>
#include <string>

namespace neseek {

// Base class for all library failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A precondition on a scenario or model was violated (bad step size, disconnected graph in
// imperfect mode, nonpositive delta, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The simulated state became non-finite.
class DivergenceError : public Error {
 public:
  DivergenceError(double time, const std::string& what) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace neseek
