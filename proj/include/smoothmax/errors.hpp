#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace smoothmax {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (dimension mismatch, empty input, bad parameter).
class ContractViolation : public Error {
  public:
    using Error::Error;
};

/// A component produced a non-finite value.
class EvaluationError : public Error {
  public:
    EvaluationError(const std::string& what, std::size_t component)
      : Error(what)
      , component_{component} {}

    std::size_t component() const noexcept { return component_; }

  private:
    std::size_t component_;
};

/// The family does not implement an optional capability (e.g. Hessians).
class UnsupportedCapability : public Error {
  public:
    using Error::Error;
};

/// The optimizer produced a non-finite gradient. Carries the offending iterate.
class DivergenceError : public Error {
  public:
    DivergenceError(const std::string& what, std::size_t iteration, Eigen::VectorXd iterate)
      : Error(what)
      , iteration_{iteration}
      , iterate_{std::move(iterate)} {}

    std::size_t            iteration() const noexcept { return iteration_; }
    const Eigen::VectorXd& iterate() const noexcept { return iterate_; }

  private:
    std::size_t     iteration_;
    Eigen::VectorXd iterate_;
};

/// A run was refused because its configuration is unusable (e.g. iteration count overflow).
class ConfigurationError : public Error {
  public:
    using Error::Error;
};

/// The exact oracle does not support the requested dimension.
class UnsupportedDimension : public Error {
  public:
    using Error::Error;
};

}  // namespace smoothmax
