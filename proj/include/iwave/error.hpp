#pragma once

#include <stdexcept>
#include <string>

namespace iwave {

/// Raised on contract violations and numerical failures across the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values encountered during time stepping.
class StepError : public Error {
 public:
  StepError(const std::string& what, long step, double time)
      : Error(what), step_(step), time_(time) {}

  long step() const { return step_; }
  double time() const { return time_; }

 private:
  long step_;
  double time_;
};

/// An iterative solver hit its iteration cap before reaching tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace iwave
