// Steady-state heat flows, bidirectional currents, rectification factor,
// maximum current, and the scalarized coefficient of performance.
#pragma once

#include "rectiflow/devices.hpp"
#include "rectiflow/lindblad.hpp"
#include "rectiflow/thermal.hpp"
#include "rectiflow/types.hpp"

namespace rectiflow {

// Zero-current threshold, in gamma*epsilon units: below this a current is
// indistinguishable from the solve's double-precision noise.
inline constexpr double kCurrentFloor = 1e-14;

/// Per-solve diagnostics used by the validity suite.
struct SteadyStateDiagnostics {
  double trace_error = 0.0;     // |tr(rho) - 1| before renormalization
  double herm_error = 0.0;      // max elementwise |rho - rho^dag| before fix
  double min_eigenvalue = 0.0;  // smallest eigenvalue of the returned state
  double residual = 0.0;        // ||L vec(rho)||_inf of the raw solution
  double energy_balance = 0.0;  // |Qdot_L + Qdot_R| in gamma*epsilon
};

/// Heat flow into reservoir `side` at the steady state, in absolute energy
/// rate units: Qdot_sigma = -Tr{H sum_k (up_k D[A_k^dag] + down_k D[A_k]) rho}
/// restricted to channels of that side. The sign makes Qdot positive when
/// energy enters the reservoir, so the cold reservoir reads positive under a
/// thermal bias. A side with no channels contributes 0 (with a warning on
/// stderr).
double heat_flow(const LindbladModel& model, Side side,
                 const DensityMatrix& rho_ss, const CouplingConfig& coupling,
                 const ThermalScenario& scenario);

/// Steady-state current J = Qdot_R - Qdot_L in absolute units. Solves for
/// the steady state internally; propagates DegenerateSteadyState.
double current(const LindbladModel& model, const CouplingConfig& coupling,
               const ThermalScenario& scenario);

/// Evaluates the current at both orientations (hot-left, then hot-right),
/// rebuilding the thermal rates for each, and reports both in
/// gamma*epsilon units. Optionally fills per-orientation diagnostics
/// (index 0 = hot-left, 1 = hot-right).
CurrentPair bidirectional(const DeviceSpec& spec,
                          const CouplingConfig& coupling,
                          const ThermalScenario& scenario,
                          SteadyStateDiagnostics* diags_hc = nullptr,
                          SteadyStateDiagnostics* diags_ch = nullptr);

/// R = |(j_hc + j_ch) / (j_hc - j_ch)|, in [0, 1] for hot->cold flows.
/// Throws NoThermalBias when both currents are below the zero-current
/// threshold (the defining ratio is 0/0 at equilibrium).
double rectification_factor(const CurrentPair& c);

/// J = max(|j_hc|, |j_ch|).
double max_current(const CurrentPair& c);

/// eta_alpha = alpha R + (1 - alpha) J, with J supplied in gamma*epsilon
/// units so the mix of a dimensionless R and a current is well-defined.
/// Throws InvalidSpec for alpha outside [0, 1].
double cop(double r, double j, double alpha);

}  // namespace rectiflow
