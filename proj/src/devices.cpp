#include "rectiflow/devices.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <sstream>

namespace rectiflow {

namespace {

// Single-qubit lowering operator in the {|0>, |1>} basis: sigma_- |1> = |0>.
Matrix lowering2() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = Complex(1.0, 0.0);
  return s;
}

Matrix number2() {
  Matrix n = Matrix::Zero(2, 2);
  n(1, 1) = Complex(1.0, 0.0);
  return n;
}

/// Two-qubit flip-flop Hamiltonian in the product basis |q_L q_R>, index
/// 2*q_L + q_R: eps_L n_L + eps_R n_R + g (s+_L s-_R + s-_L s+_R).
Matrix pair_hamiltonian(double eps_left, double eps_right, double g) {
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix n = number2();
  const Matrix sm = lowering2();
  const Matrix sp = sm.adjoint();
  return eps_left * kron(n, id) + eps_right * kron(id, n) +
         g * (kron(sp, sm) + kron(sm, sp));
}

/// Eigenoperator of H at transition energy `omega` built from the local
/// operator `local_lowering`: sum over eigenpairs (a, b) with
/// w_b - w_a = omega of P_a S P_b. Groups all same-frequency transitions
/// into one jump operator.
Matrix eigenoperator(const Eigen::SelfAdjointEigenSolver<Matrix>& es,
                     const Matrix& local_lowering, double omega,
                     double match_tol) {
  const auto& w = es.eigenvalues();
  const auto& v = es.eigenvectors();
  const Eigen::Index d = w.size();
  Matrix op = Matrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      if (std::abs((w(b) - w(a)) - omega) > match_tol) continue;
      const Complex amp = v.col(a).dot(local_lowering * v.col(b));
      if (amp != Complex(0.0, 0.0)) {
        op += amp * (v.col(a) * v.col(b).adjoint());
      }
    }
  }
  return op;
}

}  // namespace

void DeviceSpec::validate() const {
  if (!(epsilon > 0.0)) {
    throw err::invalid_spec("epsilon must be positive");
  }
  switch (family) {
    case Device::SingleQubit:
      break;
    case Device::DetunedPair:
      if (delta < 0.0 || delta > 0.2 * epsilon) {
        throw err::invalid_spec(
            "detuning delta must lie in [0, 0.2 epsilon]");
      }
      if (g < 0.0) {
        throw err::invalid_spec("exchange strength g must be nonnegative");
      }
      break;
    case Device::StrongPair:
      if (g >= epsilon) {
        std::ostringstream msg;
        msg << "strong pair transition energy epsilon - g = "
            << (epsilon - g) << " must be positive";
        throw err::non_positive_energy(msg.str());
      }
      if (!(g > 0.0)) {
        throw err::invalid_spec(
            "strong pair needs a positive exchange strength g");
      }
      break;
  }
}

DeviceSpec DeviceSpec::single_qubit(double epsilon) {
  DeviceSpec s;
  s.family = Device::SingleQubit;
  s.epsilon = epsilon;
  s.validate();
  return s;
}

DeviceSpec DeviceSpec::detuned_pair(double epsilon, double delta, double g) {
  DeviceSpec s;
  s.family = Device::DetunedPair;
  s.epsilon = epsilon;
  s.delta = delta;
  s.g = g;
  s.validate();
  return s;
}

DeviceSpec DeviceSpec::strong_pair(double epsilon, double g) {
  DeviceSpec s;
  s.family = Device::StrongPair;
  s.epsilon = epsilon;
  s.g = g;
  s.validate();
  return s;
}

LindbladModel build_model(const DeviceSpec& spec) {
  spec.validate();
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix sm = lowering2();

  switch (spec.family) {
    case Device::SingleQubit: {
      Matrix h = spec.epsilon * number2();
      return LindbladModel{
          std::move(h),
          {{sm, spec.epsilon, Side::L}, {sm, spec.epsilon, Side::R}}};
    }
    case Device::DetunedPair: {
      Matrix h = pair_hamiltonian(spec.epsilon, spec.epsilon + spec.delta,
                                  spec.g);
      // Local picture: each reservoir addresses its own qubit at that
      // qubit's bare transition energy.
      return LindbladModel{
          std::move(h),
          {{kron(sm, id), spec.epsilon, Side::L},
           {kron(id, sm), spec.epsilon + spec.delta, Side::R}}};
    }
    case Device::StrongPair: {
      Matrix h = pair_hamiltonian(spec.epsilon, spec.epsilon, spec.g);
      Eigen::SelfAdjointEigenSolver<Matrix> es(h);
      if (es.info() != Eigen::Success) {
        throw NumericError("eigendecomposition of the pair Hamiltonian failed");
      }
      // Transition energies of the coupled pair; the matching tolerance must
      // stay well below their splitting 2g.
      const std::array<double, 2> omegas = {spec.epsilon - spec.g,
                                            spec.epsilon + spec.g};
      const double match_tol =
          std::min(1e-9 * spec.epsilon, 0.25 * (omegas[1] - omegas[0]));
      std::vector<JumpChannel> channels;
      for (Side side : {Side::L, Side::R}) {
        const Matrix local =
            side == Side::L ? kron(sm, id) : kron(id, sm);
        for (double omega : omegas) {
          Matrix op = eigenoperator(es, local, omega, match_tol);
          if (op.cwiseAbs().maxCoeff() == 0.0) {
            throw NumericError(
                "strong-pair eigenoperator vanished; eigenbasis grouping "
                "failed");
          }
          channels.push_back({std::move(op), omega, side});
        }
      }
      return LindbladModel{std::move(h), std::move(channels)};
    }
  }
  throw err::invalid_spec("unknown device family");
}

std::vector<RateChannel> thermal_channels(const LindbladModel& model,
                                          const CouplingConfig& coupling,
                                          const ThermalScenario& scenario) {
  coupling.validate();
  scenario.validate();
  const SideCouplings sides = side_couplings(coupling);
  std::vector<RateChannel> out;
  out.reserve(2 * model.channels.size());
  for (const JumpChannel& ch : model.channels) {
    const double t = scenario.temperature(ch.side);
    const RatePair rp = rates(ch.energy, t, sides.of(ch.side));
    // Absorption from the reservoir drives the raising operator, emission
    // into it the lowering operator: the pairing detailed balance demands.
    out.push_back({rp.up, ch.op.adjoint()});
    out.push_back({rp.down, ch.op});
  }
  return out;
}

namespace {

/// Single-qubit-shaped current contribution at one transition energy, in
/// gamma*epsilon units with the energy weight E/epsilon:
/// +/- (E/eps) (1-chi^2) D / (1 + S -/+ chi D) per unit prefactor.
struct TermValues {
  double forward = 0.0;   // hot-left orientation
  double backward = 0.0;  // hot-right orientation (negative for hot->cold)
};

TermValues current_term(double energy, double epsilon, double chi,
                        const ThermalScenario& scenario) {
  const BiasValues b = bias_functions(energy, scenario);
  const double weight = energy / epsilon;
  return {weight * b.delta_hc / (1.0 + b.sigma - chi * b.delta_hc),
          -weight * b.delta_hc / (1.0 + b.sigma + chi * b.delta_hc)};
}

/// 1 + Gamma_L Gamma_R / (4 g^2) for the degenerate weakly-coupled pair,
/// with total widths Gamma_sigma = gamma_sigma (1 + 2 n_B(eps, T_sigma)) at
/// the side temperatures of the given orientation.
double degenerate_suppression(double epsilon, double g,
                              const CouplingConfig& coupling,
                              const ThermalScenario& scenario) {
  const SideCouplings sides = side_couplings(coupling);
  const double width_l =
      sides.left *
      (1.0 + 2.0 * bose_einstein(epsilon, scenario.temperature(Side::L)));
  const double width_r =
      sides.right *
      (1.0 + 2.0 * bose_einstein(epsilon, scenario.temperature(Side::R)));
  return 1.0 + width_l * width_r / (4.0 * g * g);
}

}  // namespace

CurrentPair analytic_currents(const DeviceSpec& spec,
                              const CouplingConfig& coupling,
                              const ThermalScenario& scenario) {
  spec.validate();
  coupling.validate();
  scenario.validate();
  const double chi = coupling.chi;
  const double one_minus_chi2 = 1.0 - chi * chi;

  switch (spec.family) {
    case Device::SingleQubit: {
      const TermValues t =
          current_term(spec.epsilon, spec.epsilon, chi, scenario);
      return {2.0 * one_minus_chi2 * t.forward,
              2.0 * one_minus_chi2 * t.backward};
    }
    case Device::DetunedPair: {
      if (spec.delta != 0.0) {
        throw err::no_analytic_form(
            "the detuned pair has no closed-form current; use the numeric "
            "engine");
      }
      if (spec.g == 0.0) {
        // Transport vanishes with the inter-qubit exchange.
        return {0.0, 0.0};
      }
      const TermValues t =
          current_term(spec.epsilon, spec.epsilon, chi, scenario);
      const double f_hc = degenerate_suppression(spec.epsilon, spec.g,
                                                 coupling, scenario);
      const double f_ch = degenerate_suppression(spec.epsilon, spec.g,
                                                 coupling, scenario.flipped());
      return {2.0 * one_minus_chi2 * t.forward / f_hc,
              2.0 * one_minus_chi2 * t.backward / f_ch};
    }
    case Device::StrongPair: {
      const TermValues lo =
          current_term(spec.epsilon - spec.g, spec.epsilon, chi, scenario);
      const TermValues hi =
          current_term(spec.epsilon + spec.g, spec.epsilon, chi, scenario);
      return {one_minus_chi2 * (lo.forward + hi.forward),
              one_minus_chi2 * (lo.backward + hi.backward)};
    }
  }
  throw err::invalid_spec("unknown device family");
}

double analytic_rectification(const DeviceSpec& spec,
                              const CouplingConfig& coupling,
                              const ThermalScenario& scenario) {
  spec.validate();
  coupling.validate();
  scenario.validate();
  const double chi = coupling.chi;

  switch (spec.family) {
    case Device::DetunedPair:
      if (spec.delta != 0.0) {
        throw err::no_analytic_form(
            "the detuned pair has no closed-form rectification factor; use "
            "the numeric engine");
      }
      [[fallthrough]];  // degenerate pair: identical to the single qubit
    case Device::SingleQubit: {
      const BiasValues b = bias_functions(spec.epsilon, scenario);
      if (b.delta_hc == 0.0) {
        throw err::equilibrium_undefined(
            "rectification is undefined at equilibrium (no occupation bias)");
      }
      return std::abs(chi) * b.delta_hc / (1.0 + b.sigma);
    }
    case Device::StrongPair: {
      const BiasValues lo = bias_functions(spec.epsilon - spec.g, scenario);
      const BiasValues hi = bias_functions(spec.epsilon + spec.g, scenario);
      if (lo.delta_hc == 0.0 && hi.delta_hc == 0.0) {
        throw err::equilibrium_undefined(
            "rectification is undefined at equilibrium (no occupation bias)");
      }
      auto p_term = [chi](double energy, const BiasValues& b) {
        const double d = b.delta_hc;
        const double s1 = 1.0 + b.sigma;
        return energy * chi * d * d / (s1 * s1 - chi * chi * d * d);
      };
      auto q_term = [chi](double energy, const BiasValues& b) {
        const double d = b.delta_hc;
        const double s1 = 1.0 + b.sigma;
        return energy * d * s1 / (s1 * s1 - chi * chi * d * d);
      };
      const double num = p_term(spec.epsilon - spec.g, lo) +
                         p_term(spec.epsilon + spec.g, hi);
      const double den = q_term(spec.epsilon - spec.g, lo) +
                         q_term(spec.epsilon + spec.g, hi);
      return std::abs(num / den);
    }
  }
  throw err::invalid_spec("unknown device family");
}

std::vector<std::string> regime_check(const DeviceSpec& spec,
                                      const CouplingConfig& coupling) {
  std::vector<std::string> warnings;
  switch (spec.family) {
    case Device::SingleQubit:
      break;
    case Device::DetunedPair:
      if (spec.g > coupling.gamma) {
        std::ostringstream msg;
        msg << "weak-coupling (local) picture assumes g <= gamma; got g = "
            << spec.g << ", gamma = " << coupling.gamma;
        warnings.push_back(msg.str());
      }
      break;
    case Device::StrongPair:
      if (spec.g < 10.0 * coupling.gamma) {
        std::ostringstream msg;
        msg << "strong-coupling (eigenbasis) picture assumes g >> gamma; "
               "got g = "
            << spec.g << ", gamma = " << coupling.gamma;
        warnings.push_back(msg.str());
      }
      break;
  }
  return warnings;
}

}  // namespace rectiflow
