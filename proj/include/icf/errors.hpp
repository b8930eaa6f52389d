#pragma once

#include <stdexcept>
#include <string>

namespace icf {

/// Radial coordinate outside the valid domain of the ambient space form.
struct RadialDomainError : std::runtime_error {
  explicit RadialDomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Principal curvatures left the admissible cone of the speed function.
struct ConeViolation : std::runtime_error {
  explicit ConeViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite value produced during a computation.
struct NumericalBlowup : std::runtime_error {
  explicit NumericalBlowup(const std::string& what) : std::runtime_error(what) {}
};

/// Spherical sphere solution queried at or past its horizon time.
struct PastEquatorError : std::runtime_error {
  explicit PastEquatorError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid or inconsistent run configuration; message names the key path.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Profile choice that makes the roundness obstruction vanish.
struct DegenerateChoice : std::runtime_error {
  explicit DegenerateChoice(const std::string& what) : std::runtime_error(what) {}
};

/// Too few usable samples for a statistical fit.
struct InsufficientData : std::runtime_error {
  explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace icf
