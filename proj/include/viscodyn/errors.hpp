#ifndef VISCODYN_ERRORS_HPP
#define VISCODYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace viscodyn {

// Tensor inversion requested on a (numerically) singular matrix.
class SingularTensor : public std::runtime_error {
public:
  explicit SingularTensor(const std::string& what) : std::runtime_error(what) {}
};

// Parametric coordinate outside [0,1].
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Geometry map with non-positive Jacobian determinant.
class DegenerateMapping : public std::runtime_error {
public:
  explicit DegenerateMapping(const std::string& what) : std::runtime_error(what) {}
};

// det(I + gradU) <= 0 at a material point; the caller may cut the time step.
class InvertedElement : public std::runtime_error {
public:
  explicit InvertedElement(const std::string& what) : std::runtime_error(what) {}
};

// Scenario/configuration file problem.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A time step could not be completed after the allowed step-size cuts.
class StepFailed : public std::runtime_error {
public:
  explicit StepFailed(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace viscodyn

#endif
