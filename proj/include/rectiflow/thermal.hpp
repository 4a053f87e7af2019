// Bose-Einstein occupations, thermal jump rates, and the asymmetric
// reservoir-coupling parameterization. All energies and temperatures are in
// the same units (k_B = hbar = 1); rates are energies.
#pragma once

#include "rectiflow/errors.hpp"
#include "rectiflow/types.hpp"

namespace rectiflow {

/// Reservoir temperature pair plus bias orientation. By convention
/// t_hot >= t_cold always; the orientation flag says which side is hot.
struct ThermalScenario {
  double t_hot = 0.0;
  double t_cold = 0.0;
  Orientation orientation = Orientation::HotLeft;

  /// Throws InvalidSpec unless t_hot >= t_cold > 0.
  void validate() const;

  /// Temperature seen by the given side under this orientation.
  double temperature(Side side) const {
    const bool hot_left = (orientation == Orientation::HotLeft);
    const bool is_left = (side == Side::L);
    return (hot_left == is_left) ? t_hot : t_cold;
  }

  /// Same temperatures, opposite orientation.
  ThermalScenario flipped() const {
    return {t_hot, t_cold,
            orientation == Orientation::HotLeft ? Orientation::HotRight
                                                : Orientation::HotLeft};
  }
};

/// Base rate gamma and left/right asymmetry chi in [-1, 1]:
/// gamma_L = gamma(1 - chi), gamma_R = gamma(1 + chi).
struct CouplingConfig {
  double gamma = 0.0;
  double chi = 0.0;

  /// Throws InvalidSpec unless gamma > 0 and |chi| <= 1.
  void validate() const;
};

struct SideCouplings {
  double left = 0.0;
  double right = 0.0;

  double of(Side side) const { return side == Side::L ? left : right; }
};

/// Absorption (up) and emission (down) rates for one channel:
/// up = gamma_side * n_B(E, T), down = gamma_side * (1 + n_B(E, T)).
/// The difference down - up equals gamma_side exactly.
struct RatePair {
  double up = 0.0;
  double down = 0.0;
};

/// Hot/cold occupation difference and sum at a given transition energy:
/// delta_hc = n_B(E, t_hot) - n_B(E, t_cold), sigma = their sum. These are
/// labeled by hot/cold, not left/right, so they do not depend on orientation.
struct BiasValues {
  double delta_hc = 0.0;
  double sigma = 0.0;
};

/// Mean bosonic occupation (e^{E/T} - 1)^{-1}, evaluated without overflow
/// for any E/T: large arguments go through exp(-E/T), small arguments
/// through the Laurent expansion T/E - 1/2 + E/(12 T).
/// Throws NonPositiveEnergy for E <= 0; requires T > 0.
double bose_einstein(double energy, double temperature);

/// Thermal rates for one channel at a given side coupling.
RatePair rates(double energy, double temperature, double gamma_side);

/// (gamma_L, gamma_R) = gamma * (1 -/+ chi).
SideCouplings side_couplings(const CouplingConfig& c);

/// Bias functions at one transition energy.
BiasValues bias_functions(double energy, const ThermalScenario& scenario);

}  // namespace rectiflow
