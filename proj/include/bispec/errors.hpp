#pragma once

#include <stdexcept>
#include <string>

namespace bispec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct GridTooCoarse : Error {
  using Error::Error;
};

struct SingularPotential : Error {
  using Error::Error;
};

// Shifted factorization hit a (near-)singular matrix; carries the estimated
// condition number so the caller can decide to perturb and retry.
struct NearSingular : Error {
  double condition_flag;
  explicit NearSingular(const std::string& msg, double cond)
      : Error(msg), condition_flag(cond) {}
};

struct FactorizationSingular : Error {
  using Error::Error;
};

// Iteration did not reach its target; carries the best residual seen.
struct ConvergenceError : Error {
  double best_residual;
  explicit ConvergenceError(const std::string& msg, double res)
      : Error(msg), best_residual(res) {}
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace bispec
