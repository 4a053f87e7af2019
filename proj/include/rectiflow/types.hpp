// rectiflow: steady-state simulator and Pareto optimizer for two-terminal
// quantum thermal rectifiers.
//
// Small POD types shared across modules.
#pragma once

namespace rectiflow {

/// Which reservoir a jump channel couples to.
enum class Side { L, R };

/// Where the hot reservoir sits. The temperature pair (t_hot, t_cold) is
/// fixed; the orientation selects which side sees which temperature.
enum class Orientation { HotLeft, HotRight };

/// The three bundled device families.
///   SingleQubit — one qubit, both reservoirs attached to the same transition.
///   DetunedPair — two weakly-coupled qubits, local jump operators,
///                 optional detuning delta on the right qubit.
///   StrongPair  — two strongly-coupled degenerate qubits, jump operators
///                 built on the eigenstates of the coupled Hamiltonian.
enum class Device { SingleQubit, DetunedPair, StrongPair };

/// Steady-state heat currents for the two bias orientations, in units of
/// gamma*epsilon. j_hc is the current with the hot reservoir on the left,
/// j_ch with the hot reservoir on the right. For hot->cold flow j_hc > 0
/// and j_ch < 0.
struct CurrentPair {
  double j_hc = 0.0;
  double j_ch = 0.0;
};

/// Canonical single-letter tag used in configs, CSV output and error
/// messages ("A", "B", "C").
constexpr const char* device_tag(Device d) {
  switch (d) {
    case Device::SingleQubit: return "A";
    case Device::DetunedPair: return "B";
    case Device::StrongPair:  return "C";
  }
  return "?";
}

}  // namespace rectiflow
