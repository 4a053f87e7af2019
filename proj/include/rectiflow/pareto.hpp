// Derivative-free maximization of the coefficient of performance over device
// parameters, Pareto-front assembly, trade-off curves, constrained
// rectification maxima, and device-dominance region maps.
//
// The optimizer is a deterministic two-stage grid search: a coarse uniform
// grid over the active parameter box, then iterative local refinement
// (shrink the box around the incumbent, re-grid, repeat). Every evaluated
// point is pooled into one cloud; winners and fronts are selected over the
// full cloud, so refining never loses a better point found earlier.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rectiflow/errors.hpp"
#include "rectiflow/rectification.hpp"
#include "rectiflow/types.hpp"

namespace rectiflow {

// Dominance tolerance shared by the front filter and the region classifier.
inline constexpr double kDominanceTol = 1e-9;

/// Which evaluator scores a parameter point: the closed forms or the
/// steady-state engine. (The CLI's "both" mode runs the two side by side at
/// the experiment layer; the optimizer itself always uses exactly one.)
enum class EngineMode { Analytic, Numeric };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool fixed() const { return lo == hi; }
};

/// Free-parameter intervals (an interval with lo == hi pins the parameter)
/// plus the fixed scenario values shared by every evaluation.
struct ParameterBox {
  Interval chi{0.0, 0.0};
  Interval delta{0.0, 0.0};
  Interval g{0.0, 0.0};
  double epsilon = 1.0;
  double gamma = 1e-3;
  double t_hot = 0.0;
  double t_cold = 0.0;
};

/// The bundled optimization ranges: chi in [0, 1] for every family;
/// delta in [0, 0.1 eps] and g in [0, 0.05 eps] for the weakly-coupled pair;
/// g in [0.1 eps, 0.95 eps] for the strongly-coupled pair.
ParameterBox default_box(Device device, double epsilon, double gamma,
                         double t_hot, double t_cold);

/// One evaluated operating point. j and r are the maximum current
/// (gamma*epsilon units) and rectification factor; eta is filled relative
/// to a particular alpha at selection time; alpha_winner marks front points
/// that win at least one alpha in the scalarization sweep.
struct PerformancePoint {
  double j = 0.0;
  double r = 0.0;
  double eta = 0.0;
  double chi = 0.0;
  double delta = 0.0;
  double g = 0.0;
  double t_hot = 0.0;
  Device device = Device::SingleQubit;
  double alpha = 0.0;
  std::optional<double> alpha_winner;
};

struct OptimizerSettings {
  int coarse_points = 64;   // points per active dimension, endpoints included
  int refine_rounds = 6;    // local refinement iterations
  int refine_points = 9;    // points per active dimension per round (odd)
  double shrink = 0.25;     // box-width factor per refinement round
  unsigned threads = 1;     // grid-evaluation workers
};

/// Evaluation accounting: total points scored and how many were skipped
/// because the physics layer rejected them (infeasible corners, equilibrium
/// cells, ...).
struct EvalStats {
  std::size_t evaluated = 0;
  std::size_t infeasible = 0;
};

/// Non-dominated subset: keeps p unless some q has J_q >= J_p + tol and
/// R_q >= R_p + tol with strict improvement in at least one. Result is
/// sorted ascending in J (stable for ties).
std::vector<PerformancePoint> nondominated_filter(
    std::vector<PerformancePoint> points, double tol = kDominanceTol);

/// Best point for one alpha: coarse grid + local refinement, argmax of
/// eta_alpha over everything evaluated. Deterministic; ties broken by
/// lexicographic (chi, delta, g). Throws AllInfeasible when no grid point
/// evaluates.
PerformancePoint maximize_cop(Device device, const ParameterBox& box,
                              double alpha, EngineMode engine,
                              const OptimizerSettings& settings = {},
                              EvalStats* stats = nullptr);

/// Scalarization sweep: the coarse grid is evaluated once and shared; each
/// alpha then refines locally around its own incumbent; all points are
/// pooled, per-alpha winners re-selected over the full cloud, and the front
/// is the non-dominated subset of the cloud.
struct ParetoResult {
  std::vector<PerformancePoint> front;    // ascending in J
  std::vector<PerformancePoint> winners;  // aligned with the alpha grid
  EvalStats stats;
};
ParetoResult pareto_front(Device device, const ParameterBox& box,
                          const std::vector<double>& alpha_grid,
                          EngineMode engine,
                          const OptimizerSettings& settings = {});

/// Optimal-operation locus: maximize_cop at a fixed alpha for each hot
/// temperature in the sweep. Temperatures whose whole box is infeasible are
/// skipped (reported through stats).
std::vector<PerformancePoint> tradeoff_curve(
    Device device, const std::vector<double>& t_hot_sweep, double alpha,
    double epsilon, double gamma, double t_cold, EngineMode engine,
    const OptimizerSettings& settings = {}, EvalStats* stats = nullptr);

/// Maximum rectification subject to a minimum current: argmax of R over the
/// cloud restricted to J >= j_min (j_min in the engine's reported
/// gamma*epsilon units). Refinement chases the constrained incumbent.
/// Throws Infeasible when nothing satisfies the constraint.
PerformancePoint max_r_given_j(Device device, const ParameterBox& box,
                               double j_min, EngineMode engine,
                               const OptimizerSettings& settings = {},
                               EvalStats* stats = nullptr);

/// Cell labels for the two-device comparison maps.
enum class RegionLabel { FirstDominates, SecondDominates, AlphaDependent };
enum class RegionAxis { Delta, G };

constexpr const char* region_label_tag(RegionLabel l) {
  switch (l) {
    case RegionLabel::FirstDominates: return "FIRST";
    case RegionLabel::SecondDominates: return "SECOND";
    case RegionLabel::AlphaDependent: return "ALPHA";
  }
  return "?";
}

struct RegionMap {
  std::vector<double> t_hot_values;  // rows
  std::vector<double> axis_values;   // columns
  RegionAxis axis = RegionAxis::Delta;
  std::vector<RegionLabel> labels;   // row-major, size rows x columns

  RegionLabel at(std::size_t i_t, std::size_t i_axis) const {
    return labels[i_t * axis_values.size() + i_axis];
  }
};

/// Shared parameters for a region map; the axis value is applied to
/// whichever devices carry that parameter, the rest is fixed.
struct RegionFixedParams {
  double epsilon = 1.0;
  double gamma = 1e-3;
  double t_cold = 0.01;
  double chi = 0.4;
  double delta = 0.0;  // used when the axis is not Delta
  double g = 0.0;      // used when the axis is not G
};

/// Per-cell comparison of two devices at identical operating parameters:
/// FirstDominates when the first device's J and R are both larger than the
/// second's beyond the dominance tolerance; symmetric for SecondDominates;
/// anything else (including ties and cells the physics layer rejects) is
/// AlphaDependent. Swapping the devices swaps the First/Second labels
/// cell-by-cell.
RegionMap region_compare(Device first, Device second,
                         const std::vector<double>& t_hot_values,
                         RegionAxis axis,
                         const std::vector<double>& axis_values,
                         const RegionFixedParams& fixed, EngineMode engine,
                         unsigned threads = 1, EvalStats* stats = nullptr);

}  // namespace rectiflow
