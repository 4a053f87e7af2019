#include "rectiflow/rectification.hpp"

#include <cmath>
#include <iostream>

namespace rectiflow {

namespace {

/// Dissipative part restricted to one side's channels, applied to rho.
Matrix side_dissipator_apply(const LindbladModel& model, Side side,
                             const Matrix& rho, const CouplingConfig& coupling,
                             const ThermalScenario& scenario, bool* any) {
  const SideCouplings sides = side_couplings(coupling);
  Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
  *any = false;
  for (const JumpChannel& ch : model.channels) {
    if (ch.side != side) continue;
    *any = true;
    const RatePair rp =
        rates(ch.energy, scenario.temperature(side), sides.of(side));
    if (rp.up != 0.0) {
      acc += rp.up * dissipator_apply(ch.op.adjoint(), rho);
    }
    if (rp.down != 0.0) {
      acc += rp.down * dissipator_apply(ch.op, rho);
    }
  }
  return acc;
}

struct OrientationResult {
  double j = 0.0;  // Qdot_R - Qdot_L, absolute units
  SteadyStateDiagnostics diags;
};

OrientationResult solve_orientation(const LindbladModel& model,
                                    const CouplingConfig& coupling,
                                    const ThermalScenario& scenario) {
  const auto channels = thermal_channels(model, coupling, scenario);
  const Liouvillian liou = build_liouvillian(model.hamiltonian, channels);
  SteadySolveInfo info;
  const DensityMatrix rho = steady_state(liou, &info);
  const double q_left =
      heat_flow(model, Side::L, rho, coupling, scenario);
  const double q_right =
      heat_flow(model, Side::R, rho, coupling, scenario);
  OrientationResult out;
  out.j = q_right - q_left;
  out.diags.trace_error = info.trace_error;
  out.diags.herm_error = info.herm_error;
  out.diags.min_eigenvalue = info.min_eigenvalue;
  out.diags.residual = info.residual;
  out.diags.energy_balance = std::abs(q_left + q_right);
  return out;
}

}  // namespace

double heat_flow(const LindbladModel& model, Side side,
                 const DensityMatrix& rho_ss, const CouplingConfig& coupling,
                 const ThermalScenario& scenario) {
  coupling.validate();
  scenario.validate();
  bool any = false;
  const Matrix dissipated =
      side_dissipator_apply(model, side, rho_ss.rho, coupling, scenario, &any);
  if (!any) {
    std::cerr << "rectiflow: warning: no jump channels on side "
              << (side == Side::L ? "L" : "R")
              << "; its heat flow is identically zero\n";
    return 0.0;
  }
  return -(model.hamiltonian * dissipated).trace().real();
}

double current(const LindbladModel& model, const CouplingConfig& coupling,
               const ThermalScenario& scenario) {
  return solve_orientation(model, coupling, scenario).j;
}

CurrentPair bidirectional(const DeviceSpec& spec,
                          const CouplingConfig& coupling,
                          const ThermalScenario& scenario,
                          SteadyStateDiagnostics* diags_hc,
                          SteadyStateDiagnostics* diags_ch) {
  coupling.validate();
  scenario.validate();
  const LindbladModel model = build_model(spec);
  const double unit = coupling.gamma * spec.epsilon;

  ThermalScenario hot_left = scenario;
  hot_left.orientation = Orientation::HotLeft;
  ThermalScenario hot_right = scenario;
  hot_right.orientation = Orientation::HotRight;

  OrientationResult fwd = solve_orientation(model, coupling, hot_left);
  OrientationResult bwd = solve_orientation(model, coupling, hot_right);
  fwd.diags.energy_balance /= unit;
  bwd.diags.energy_balance /= unit;
  if (diags_hc != nullptr) *diags_hc = fwd.diags;
  if (diags_ch != nullptr) *diags_ch = bwd.diags;
  return {fwd.j / unit, bwd.j / unit};
}

double rectification_factor(const CurrentPair& c) {
  if (std::abs(c.j_hc) < kCurrentFloor && std::abs(c.j_ch) < kCurrentFloor) {
    throw err::no_thermal_bias(
        "both currents are below the zero-current threshold; the "
        "rectification factor is 0/0 at equilibrium");
  }
  const double r = std::abs((c.j_hc + c.j_ch) / (c.j_hc - c.j_ch));
  if (!std::isfinite(r)) {
    throw NumericError(
        "rectification factor is not finite (equal bidirectional currents)");
  }
  return r;
}

double max_current(const CurrentPair& c) {
  return std::max(std::abs(c.j_hc), std::abs(c.j_ch));
}

double cop(double r, double j, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw err::invalid_spec("the trade-off weight alpha must lie in [0, 1]");
  }
  return alpha * r + (1.0 - alpha) * j;
}

}  // namespace rectiflow
