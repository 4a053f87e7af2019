#include "rectiflow/thermal.hpp"

#include <cmath>
#include <sstream>

namespace rectiflow {

void ThermalScenario::validate() const {
  if (!(t_hot > 0.0) || !(t_cold > 0.0)) {
    throw err::invalid_spec("temperatures must be positive");
  }
  if (t_hot < t_cold) {
    throw err::invalid_spec(
        "t_hot must be >= t_cold; use the orientation flag to flip the bias");
  }
}

void CouplingConfig::validate() const {
  if (!(gamma > 0.0)) {
    throw err::invalid_spec("base rate gamma must be positive");
  }
  if (!(std::abs(chi) <= 1.0)) {
    throw err::invalid_spec("asymmetry chi must lie in [-1, 1]");
  }
}

double bose_einstein(double energy, double temperature) {
  if (!(energy > 0.0)) {
    std::ostringstream msg;
    msg << "transition energy must be positive, got " << energy;
    throw err::non_positive_energy(msg.str());
  }
  if (!(temperature > 0.0)) {
    throw err::invalid_spec("temperature must be positive");
  }
  const double x = energy / temperature;
  if (x > 30.0) {
    // Large argument: e^x overflows long before x ~ 700 matters for the
    // result; the occupation is e^{-x}/(1 - e^{-x}), which underflows
    // gracefully to 0.
    const double e = std::exp(-x);
    return e / (1.0 - e);
  }
  if (x < 1e-6) {
    // Small argument: 1/(e^x - 1) = 1/x - 1/2 + x/12 + O(x^3).
    return 1.0 / x - 0.5 + x / 12.0;
  }
  return 1.0 / std::expm1(x);
}

RatePair rates(double energy, double temperature, double gamma_side) {
  if (gamma_side < 0.0) {
    throw err::invalid_spec("side coupling must be nonnegative");
  }
  const double n = bose_einstein(energy, temperature);
  const double up = gamma_side * n;
  // down = gamma_side * (1 + n): written as up + gamma_side so the
  // detailed-balance gap down - up reproduces gamma_side up to the single
  // rounding of the sum (no representable pair can pin the gap bitwise once
  // ulp(down) exceeds ulp(gamma_side)).
  return {up, up + gamma_side};
}

SideCouplings side_couplings(const CouplingConfig& c) {
  c.validate();
  return {c.gamma * (1.0 - c.chi), c.gamma * (1.0 + c.chi)};
}

BiasValues bias_functions(double energy, const ThermalScenario& scenario) {
  scenario.validate();
  const double n_hot = bose_einstein(energy, scenario.t_hot);
  const double n_cold = bose_einstein(energy, scenario.t_cold);
  return {n_hot - n_cold, n_hot + n_cold};
}

}  // namespace rectiflow
