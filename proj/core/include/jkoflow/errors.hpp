#pragma once

#include <stdexcept>
#include <string>

namespace jkoflow {

/// Bad shapes, out-of-range parameters, mismatched grids.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyDensityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A particle or a reconstructed cap left the computational domain.
class DomainOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnequalMassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CflViolation : public std::runtime_error {
 public:
  CflViolation(const std::string& what, double admissible_dt)
      : std::runtime_error(what), admissible_dt_(admissible_dt) {}
  double admissible_dt() const { return admissible_dt_; }

 private:
  double admissible_dt_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The inner minimizer hit its iteration cap before reaching tolerance.
class SolverStall : public std::runtime_error {
 public:
  SolverStall(const std::string& what, int step)
      : std::runtime_error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace jkoflow
