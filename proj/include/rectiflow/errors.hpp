// Error hierarchy. Three coarse classes map one-to-one onto the C API status
// codes and the CLI exit codes: configuration (1), domain/physics (2),
// numerical failure (3). Domain errors carry a fine-grained kind so tests and
// callers can distinguish, e.g., an equilibrium input from a degenerate
// generator without string matching.
#pragma once

#include <stdexcept>
#include <string>

namespace rectiflow {

enum class ErrorClass : int {
  Config = 1,
  Domain = 2,
  Numeric = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& msg)
      : std::runtime_error(msg), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

/// Invalid configuration: malformed JSON, unknown keys, out-of-range values
/// detected before any physics runs.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg)
      : Error(ErrorClass::Config, msg) {}
};

/// A physically meaningful rejection: the input describes a model outside the
/// validity domain, or a quantity that is undefined there.
class DomainError : public Error {
 public:
  enum class Kind {
    NonPositiveEnergy,     // Bohr frequency E <= 0 (e.g. g >= epsilon)
    InvalidSpec,           // device parameters outside their validity domain
    NoAnalyticForm,        // closed form does not exist (detuned pair)
    NoThermalBias,         // both currents ~0: rectification factor is 0/0
    EquilibriumUndefined,  // bias functions vanish at every channel energy
    DegenerateSteadyState, // generator null space dimension > 1
    Infeasible,            // constrained optimum does not exist in the box
    AllInfeasible,         // every optimizer grid point raised an error
  };

  DomainError(Kind kind, const std::string& msg)
      : Error(ErrorClass::Domain, msg), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Numerical breakdown that is not explained by the model (solver failure,
/// residual beyond tolerance on a non-degenerate system).
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg)
      : Error(ErrorClass::Numeric, msg) {}
};

namespace err {

inline DomainError non_positive_energy(const std::string& msg) {
  return {DomainError::Kind::NonPositiveEnergy, msg};
}
inline DomainError invalid_spec(const std::string& msg) {
  return {DomainError::Kind::InvalidSpec, msg};
}
inline DomainError no_analytic_form(const std::string& msg) {
  return {DomainError::Kind::NoAnalyticForm, msg};
}
inline DomainError no_thermal_bias(const std::string& msg) {
  return {DomainError::Kind::NoThermalBias, msg};
}
inline DomainError equilibrium_undefined(const std::string& msg) {
  return {DomainError::Kind::EquilibriumUndefined, msg};
}
inline DomainError degenerate_steady_state(const std::string& msg) {
  return {DomainError::Kind::DegenerateSteadyState, msg};
}
inline DomainError infeasible(const std::string& msg) {
  return {DomainError::Kind::Infeasible, msg};
}
inline DomainError all_infeasible(const std::string& msg) {
  return {DomainError::Kind::AllInfeasible, msg};
}

}  // namespace err
}  // namespace rectiflow
