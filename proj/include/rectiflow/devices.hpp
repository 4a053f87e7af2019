// Construction of the three bundled device models (Hamiltonian + thermal
// jump channels) and their closed-form currents and rectification factors,
// which serve as an independent analytic oracle for the numeric engine.
#pragma once

#include <string>
#include <vector>

#include "rectiflow/lindblad.hpp"
#include "rectiflow/thermal.hpp"
#include "rectiflow/types.hpp"

namespace rectiflow {

/// Device parameters. epsilon is the qubit gap; delta the right-qubit
/// detuning (detuned pair only); g the inter-qubit exchange strength
/// (pair devices only).
struct DeviceSpec {
  Device family = Device::SingleQubit;
  double epsilon = 1.0;
  double delta = 0.0;
  double g = 0.0;

  /// Throws InvalidSpec / NonPositiveEnergy when outside the validity
  /// domain: epsilon > 0; detuned pair needs 0 <= delta <= 0.2 epsilon and
  /// g >= 0; strong pair needs 0 < g < epsilon (both transition energies
  /// epsilon -/+ g must stay positive).
  void validate() const;

  static DeviceSpec single_qubit(double epsilon);
  static DeviceSpec detuned_pair(double epsilon, double delta, double g);
  static DeviceSpec strong_pair(double epsilon, double g);
};

/// One jump channel: a lowering operator, the transition energy it carries,
/// and the reservoir side it couples to. The operator satisfies
/// [H, A] = -E A on its support.
struct JumpChannel {
  Matrix op;
  double energy = 0.0;
  Side side = Side::L;
};

/// Hamiltonian plus jump channels; scenario-independent (rates are attached
/// separately from the temperatures and couplings).
struct LindbladModel {
  Matrix hamiltonian;
  std::vector<JumpChannel> channels;
};

/// Builds the device model:
///   single qubit — H = epsilon |1><1|, one lowering channel per side at
///                  energy epsilon;
///   detuned pair — H = epsilon n_L + (epsilon+delta) n_R + g flip-flop,
///                  local lowering channels: left qubit at epsilon (side L),
///                  right qubit at epsilon+delta (side R);
///   strong pair  — same H with delta = 0; channels are eigenoperators of
///                  the coupled Hamiltonian at the two transition energies
///                  epsilon -/+ g, one per (side, energy), built by
///                  projecting the local lowering operator between
///                  eigenprojectors (same-frequency transitions summed).
LindbladModel build_model(const DeviceSpec& spec);

/// Expands a model into (rate, operator) pairs for build_liouvillian: per
/// channel with energy E on side sigma, absorption gamma_sigma n_B(E, T)
/// drives the raising operator A^dag and emission gamma_sigma (1 + n_B)
/// drives the lowering operator A, with T the side temperature under the
/// scenario's orientation.
std::vector<RateChannel> thermal_channels(const LindbladModel& model,
                                          const CouplingConfig& coupling,
                                          const ThermalScenario& scenario);

/// Closed-form steady-state currents (j_hc, j_ch) in units of
/// gamma*epsilon:
///   single qubit — J = +/- 2 (1-chi^2) D / (1 + S -/+ chi D) with
///                  D = delta_hc(epsilon), S = sigma(epsilon);
///   degenerate pair (delta = 0) — the single-qubit value divided by
///                  1 + Gamma_L Gamma_R / (4 g^2), where Gamma_sigma is the
///                  total width gamma_sigma (1 + 2 n_B(epsilon, T_sigma)) at
///                  the side temperature of the corresponding orientation;
///   strong pair  — sum of two single-qubit-shaped terms at the transition
///                  energies epsilon - g and epsilon + g, prefactor
///                  (1-chi^2) (E/epsilon) per term.
/// Throws NoAnalyticForm for a detuned pair with delta != 0.
CurrentPair analytic_currents(const DeviceSpec& spec,
                              const CouplingConfig& coupling,
                              const ThermalScenario& scenario);

/// Closed-form rectification factor:
///   single qubit — R = |chi| D / (1 + S);
///   degenerate pair — identical to the single qubit;
///   strong pair  — R = |(E- P(E-) + E+ P(E+)) / (E- Q(E-) + E+ Q(E+))|
///                  with P(E) = chi D^2 / ((1+S)^2 - chi^2 D^2) and
///                  Q(E) = D (1+S) / ((1+S)^2 - chi^2 D^2).
/// Throws NoAnalyticForm for delta != 0 and EquilibriumUndefined when the
/// bias difference vanishes at every channel energy.
double analytic_rectification(const DeviceSpec& spec,
                              const CouplingConfig& coupling,
                              const ThermalScenario& scenario);

/// Non-fatal regime advisories: the local-ME pair wants g <= gamma, the
/// global-ME pair wants g >= 10 gamma. Never blocks computation.
std::vector<std::string> regime_check(const DeviceSpec& spec,
                                      const CouplingConfig& coupling);

}  // namespace rectiflow
