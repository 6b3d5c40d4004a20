#pragma once
#include <stdexcept>
#include <string>

namespace biofilm {

// exit codes used by the CLI
enum ExitCode : int {
  kExitOk = 0,
  kExitPartial = 1,
  kExitNumerical = 2,
  kExitSolver = 3,
  kExitConfig = 64,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// bad argument values (negative concentrations, empty grids, ...)
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// bracketing failure, non-convergence, oracle disagreement
class SolverError : public Error {
 public:
  using Error::Error;
};

// NaN, collapse of L, exhausted step rejections
class NumericalAbort : public Error {
 public:
  using Error::Error;
};

class CflViolation : public Error {
 public:
  CflViolation(const std::string& what, double courant) : Error(what), courant(courant) {}
  double courant;
};

}  // namespace biofilm
