#pragma once

#include <stdexcept>
#include <string>

namespace critsol {

/// Base class of all solver-side failures. `kind()` is a stable tag used in
/// machine-readable error records.
class SolverError : public std::runtime_error {
 public:
  SolverError(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class QuadratureError : public SolverError {
 public:
  explicit QuadratureError(const std::string& what) : SolverError("quadrature", what) {}
};

class NoBracketError : public SolverError {
 public:
  explicit NoBracketError(const std::string& what) : SolverError("no_bracket", what) {}
};

class ResidualError : public SolverError {
 public:
  explicit ResidualError(const std::string& what) : SolverError("residual", what) {}
};

class GridError : public SolverError {
 public:
  explicit GridError(const std::string& what) : SolverError("grid", what) {}
};

class IntegrationError : public SolverError {
 public:
  explicit IntegrationError(const std::string& what) : SolverError("integration", what) {}
};

class EigenError : public SolverError {
 public:
  explicit EigenError(const std::string& what) : SolverError("eigen", what) {}
};

}  // namespace critsol
