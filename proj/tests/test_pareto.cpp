#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "doctest.h"
#include "rectiflow/pareto.hpp"

using namespace rectiflow;

namespace {

PerformancePoint make_pt(double j, double r) {
  PerformancePoint p;
  p.j = j;
  p.r = r;
  return p;
}

DomainError::Kind thrown_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DomainError& e) {
    return e.kind();
  }
  FAIL("expected a DomainError");
  return DomainError::Kind::InvalidSpec;  // unreachable
}

// Independent O(n^2) restatement of the dominance rule, used as an oracle.
std::vector<PerformancePoint> brute_force_front(
    const std::vector<PerformancePoint>& pts, double tol) {
  std::vector<PerformancePoint> kept;
  for (const PerformancePoint& p : pts) {
    bool dominated = false;
    for (const PerformancePoint& q : pts) {
      if (q.j >= p.j + tol && q.r >= p.r + tol) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(p);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const PerformancePoint& a, const PerformancePoint& b) {
                     return a.j < b.j;
                   });
  return kept;
}

// Maximizes a unimodal function on [lo, hi] by ternary search.
double ternary_argmax(const std::function<double(double)>& f, double lo,
                      double hi) {
  for (int i = 0; i < 300; ++i) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (f(a) < f(b)) {
      lo = a;
    } else {
      hi = b;
    }
  }
  return 0.5 * (lo + hi);
}

double point_segment_distance(double px, double py, double ax, double ay,
                              double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = px - (ax + t * dx), ey = py - (ay + t * dy);
  return std::hypot(ex, ey);
}

// Largest distance from any point of `from` to the polyline through `to`
// (both fronts ordered ascending in J, so consecutive points are adjacent).
double directed_hausdorff(const std::vector<PerformancePoint>& from,
                          const std::vector<PerformancePoint>& to) {
  REQUIRE(to.size() >= 2);
  double worst = 0.0;
  for (const PerformancePoint& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < to.size(); ++i) {
      best = std::min(best, point_segment_distance(p.j, p.r, to[i].j, to[i].r,
                                                   to[i + 1].j, to[i + 1].r));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

// Closed-form operating point of the single-qubit device at one chi.
PerformancePoint curve_point(double chi, const ThermalScenario& scenario) {
  const DeviceSpec spec = DeviceSpec::single_qubit(1.0);
  const CouplingConfig coupling{1e-3, chi};
  PerformancePoint p;
  p.j = max_current(analytic_currents(spec, coupling, scenario));
  p.r = analytic_rectification(spec, coupling, scenario);
  p.chi = chi;
  return p;
}

const ThermalScenario kScenario{2.0, 0.01, Orientation::HotLeft};

}  // namespace

TEST_CASE("non-dominated filter keeps exactly the undominated points") {
  SUBCASE("mutually incomparable points all survive") {
    const auto front = nondominated_filter(
        {make_pt(1.0, 0.5), make_pt(2.0, 0.4), make_pt(1.5, 0.45)});
    REQUIRE(front.size() == 3);
    CHECK(front[0].j == 1.0);   // ascending in J
    CHECK(front[1].j == 1.5);
    CHECK(front[2].j == 2.0);
  }
  SUBCASE("a point better in both coordinates removes the other") {
    const auto front =
        nondominated_filter({make_pt(1.0, 0.5), make_pt(2.0, 0.6)});
    REQUIRE(front.size() == 1);
    CHECK(front[0].j == 2.0);
    CHECK(front[0].r == 0.6);
  }
  SUBCASE("empty input") {
    CHECK(nondominated_filter({}).empty());
  }
  SUBCASE("improvements inside the tolerance do not dominate") {
    CHECK(nondominated_filter(
              {make_pt(1.0, 0.5), make_pt(1.0 + 5e-10, 0.5 + 5e-10)})
              .size() == 2);
    CHECK(nondominated_filter(
              {make_pt(1.0, 0.5), make_pt(1.0 + 2e-9, 0.5 + 2e-9)})
              .size() == 1);
  }
  SUBCASE("equal-J points are kept in input order") {
    const auto front =
        nondominated_filter({make_pt(1.0, 0.5), make_pt(1.0, 0.4)});
    REQUIRE(front.size() == 2);
    CHECK(front[0].r == 0.5);
    CHECK(front[1].r == 0.4);
  }
  SUBCASE("agrees with a quadratic restatement on a structured cloud") {
    std::vector<PerformancePoint> pts;
    for (int i = 0; i <= 200; ++i) {
      const double x = i / 200.0;
      pts.push_back(make_pt(std::sin(3.1 * x) + 0.3 * std::cos(17.0 * x),
                            std::cos(2.3 * x) + 0.2 * std::sin(13.0 * x)));
    }
    const auto fast = nondominated_filter(pts);
    const auto slow = brute_force_front(pts, kDominanceTol);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
      CHECK(fast[i].j == slow[i].j);
      CHECK(fast[i].r == slow[i].r);
    }
  }
}

TEST_CASE("pure-rectification objective drives the asymmetry to its edge") {
  const ParameterBox box = default_box(Device::SingleQubit, 1.0, 1e-3,
                                       kScenario.t_hot, kScenario.t_cold);
  const PerformancePoint w =
      maximize_cop(Device::SingleQubit, box, 1.0, EngineMode::Analytic);
  CHECK(w.chi == 1.0);  // chi = 1 is a coarse-grid endpoint, found exactly
  const BiasValues b = bias_functions(1.0, kScenario);
  CHECK(w.r == doctest::Approx(b.delta_hc / (1.0 + b.sigma)).epsilon(1e-12));
  CHECK(w.eta == w.r);  // alpha = 1 scores rectification only
  CHECK(w.alpha == 1.0);
  CHECK(w.device == Device::SingleQubit);
  CHECK(w.t_hot == kScenario.t_hot);
}

TEST_CASE("pure-throughput objective finds the interior current maximum") {
  const ParameterBox box = default_box(Device::SingleQubit, 1.0, 1e-3,
                                       kScenario.t_hot, kScenario.t_cold);
  const PerformancePoint w =
      maximize_cop(Device::SingleQubit, box, 0.0, EngineMode::Analytic);

  const auto j_of_chi = [](double chi) {
    return curve_point(chi, kScenario).j;
  };
  const double chi_star = ternary_argmax(j_of_chi, 0.0, 1.0);
  CHECK(chi_star > 0.05);  // genuinely interior
  CHECK(chi_star < 0.95);
  CHECK(w.chi == doctest::Approx(chi_star).epsilon(1e-4));
  CHECK(w.eta <= j_of_chi(chi_star) + 1e-12);
  CHECK(w.eta == doctest::Approx(j_of_chi(chi_star)).epsilon(1e-8));
}

TEST_CASE("a fully pinned box evaluates exactly that point") {
  ParameterBox box;
  box.chi = {0.3, 0.3};
  box.delta = {0.0, 0.0};
  box.g = {0.02, 0.02};
  box.epsilon = 1.0;
  box.gamma = 1e-3;
  box.t_hot = 2.0;
  box.t_cold = 0.01;
  EvalStats stats;
  const PerformancePoint w =
      maximize_cop(Device::DetunedPair, box, 0.5, EngineMode::Numeric,
                   OptimizerSettings{}, &stats);
  CHECK(w.chi == 0.3);
  CHECK(w.delta == 0.0);
  CHECK(w.g == 0.02);
  CHECK(w.eta == doctest::Approx(0.5 * w.r + 0.5 * w.j).epsilon(1e-15));
  CHECK(stats.infeasible == 0);
}

TEST_CASE("an all-equilibrium box reports every point infeasible") {
  const ParameterBox box =
      default_box(Device::SingleQubit, 1.0, 1e-3, 1.0, 1.0);
  OptimizerSettings settings;
  settings.coarse_points = 5;
  settings.refine_rounds = 0;
  EvalStats stats;
  CHECK(thrown_kind([&] {
          maximize_cop(Device::SingleQubit, box, 0.5, EngineMode::Analytic,
                       settings, &stats);
        }) == DomainError::Kind::AllInfeasible);
  CHECK(stats.infeasible == stats.evaluated);
  CHECK(stats.evaluated > 0);
}

TEST_CASE("refinement never worsens the best score found") {
  const ParameterBox box = default_box(Device::SingleQubit, 1.0, 1e-3,
                                       kScenario.t_hot, kScenario.t_cold);
  OptimizerSettings settings;
  settings.coarse_points = 33;
  double previous = -1.0;
  for (int rounds : {0, 3, 6}) {
    settings.refine_rounds = rounds;
    const PerformancePoint w = maximize_cop(Device::SingleQubit, box, 0.25,
                                            EngineMode::Analytic, settings);
    CHECK(w.eta >= previous);
    previous = w.eta;
  }
}

TEST_CASE("scalarization sweep produces a consistent front and winners") {
  std::vector<double> alphas;
  for (int i = 0; i <= 20; ++i) alphas.push_back(i / 20.0);
  const ParameterBox box = default_box(Device::SingleQubit, 1.0, 1e-3,
                                       kScenario.t_hot, kScenario.t_cold);
  OptimizerSettings settings;
  settings.coarse_points = 65;
  settings.refine_rounds = 3;
  const ParetoResult res = pareto_front(Device::SingleQubit, box, alphas,
                                        EngineMode::Analytic, settings);

  REQUIRE(res.winners.size() == alphas.size());
  REQUIRE(!res.front.empty());
  CHECK(res.stats.evaluated > 0);

  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const PerformancePoint& w = res.winners[i];
    CHECK(w.alpha == alphas[i]);
    CHECK(w.eta ==
          doctest::Approx(cop(w.r, w.j, w.alpha)).epsilon(1e-15));
    // The winner is selected over the full cloud, so no front point can
    // score higher at the same alpha.
    for (const PerformancePoint& p : res.front) {
      CHECK(w.eta >= cop(p.r, p.j, w.alpha) - 1e-12);
    }
  }

  // The front is already non-dominated: filtering it again is a no-op.
  CHECK(nondominated_filter(res.front).size() == res.front.size());
  // Ascending in J.
  for (std::size_t i = 0; i + 1 < res.front.size(); ++i) {
    CHECK(res.front[i].j <= res.front[i + 1].j);
  }
  // At least the alpha = 1 winner must be marked as winning its alpha.
  CHECK(std::any_of(res.front.begin(), res.front.end(),
                    [](const PerformancePoint& p) {
                      return p.alpha_winner.has_value();
                    }));
}

TEST_CASE("single-qubit front follows the closed-form trade-off curve") {
  // Sample the parametric curve (J(chi), R(chi)) at resolution 1e-3 and keep
  // its non-dominated portion; the optimized front must coincide with it to
  // within 1e-3 in the (J, R) plane (symmetric polyline Hausdorff metric).
  std::vector<PerformancePoint> curve;
  for (int i = 0; i <= 1000; ++i) {
    curve.push_back(curve_point(i / 1000.0, kScenario));
  }
  const std::vector<PerformancePoint> curve_front =
      brute_force_front(curve, kDominanceTol);
  REQUIRE(curve_front.size() >= 100);

  std::vector<double> alphas;
  for (int i = 0; i <= 100; ++i) alphas.push_back(i / 100.0);
  const ParameterBox box = default_box(Device::SingleQubit, 1.0, 1e-3,
                                       kScenario.t_hot, kScenario.t_cold);
  OptimizerSettings settings;
  settings.coarse_points = 1001;  // chi resolution 1e-3
  const ParetoResult res = pareto_front(Device::SingleQubit, box, alphas,
                                        EngineMode::Analytic, settings);
  REQUIRE(res.front.size() >= 100);

  const double d1 = directed_hausdorff(res.front, curve_front);
  const double d2 = directed_hausdorff(curve_front, res.front);
  CHECK(std::max(d1, d2) < 1e-3);
}

TEST_CASE("trade-off sweep skips equilibrium temperatures without aborting") {
  OptimizerSettings settings;
  settings.coarse_points = 17;
  settings.refine_rounds = 2;
  EvalStats stats;
  const std::vector<PerformancePoint> rows =
      tradeoff_curve(Device::SingleQubit, {2.0, 1.0}, 0.5, 1.0, 1e-3, 1.0,
                     EngineMode::Analytic, settings, &stats);
  REQUIRE(rows.size() == 1);  // T_h = t_cold contributes nothing
  CHECK(rows[0].t_hot == 2.0);
  CHECK(stats.infeasible > 0);
}

TEST_CASE("constrained rectification maximum sits on the current "
          "constraint boundary") {
  const ParameterBox box = default_box(Device::SingleQubit, 1.0, 1e-3,
                                       kScenario.t_hot, kScenario.t_cold);

  SUBCASE("an inactive constraint reduces to the pure-R maximum") {
    const PerformancePoint w = max_r_given_j(Device::SingleQubit, box, 0.0,
                                             EngineMode::Analytic);
    const PerformancePoint best_r =
        maximize_cop(Device::SingleQubit, box, 1.0, EngineMode::Analytic);
    CHECK(w.chi == best_r.chi);
    CHECK(w.r == best_r.r);
    CHECK(w.alpha == 1.0);
  }

  SUBCASE("an active constraint pins the optimum to its boundary") {
    const double j_min = 1.0;
    const PerformancePoint w = max_r_given_j(Device::SingleQubit, box, j_min,
                                             EngineMode::Analytic);
    CHECK(w.j >= j_min);

    // Oracle: R grows with chi while J falls beyond its interior maximum,
    // so the optimum is the largest chi with J(chi) >= j_min. Locate that
    // boundary by bisection on the closed form.
    const auto j_of_chi = [](double chi) {
      return curve_point(chi, kScenario).j;
    };
    const double chi_star = ternary_argmax(j_of_chi, 0.0, 1.0);
    REQUIRE(j_of_chi(chi_star) > j_min);  // the constraint is satisfiable
    double lo = chi_star, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (j_of_chi(mid) >= j_min ? lo : hi) = mid;
    }
    const double r_oracle = curve_point(lo, kScenario).r;
    CHECK(w.r <= r_oracle + 1e-12);
    CHECK(w.r == doctest::Approx(r_oracle).epsilon(1e-4));
  }

  SUBCASE("an unsatisfiable constraint is reported as such") {
    CHECK(thrown_kind([&] {
            max_r_given_j(Device::SingleQubit, box, 100.0,
                          EngineMode::Analytic);
          }) == DomainError::Kind::Infeasible);
  }
}

TEST_CASE("bundled optimization boxes carry the documented ranges") {
  const ParameterBox a = default_box(Device::SingleQubit, 2.0, 1e-3, 2.0, 0.1);
  CHECK(a.chi.lo == 0.0);
  CHECK(a.chi.hi == 1.0);
  CHECK(a.delta.fixed());
  CHECK(a.g.fixed());

  const ParameterBox b = default_box(Device::DetunedPair, 2.0, 1e-3, 2.0, 0.1);
  CHECK(b.delta.lo == 0.0);
  CHECK(b.delta.hi == doctest::Approx(0.2));   // 0.1 * epsilon
  CHECK(b.g.lo == 0.0);
  CHECK(b.g.hi == doctest::Approx(0.1));       // 0.05 * epsilon

  const ParameterBox c = default_box(Device::StrongPair, 2.0, 1e-3, 2.0, 0.1);
  CHECK(c.g.lo == doctest::Approx(0.2));       // 0.10 * epsilon
  CHECK(c.g.hi == doctest::Approx(1.9));       // 0.95 * epsilon
  CHECK(c.delta.fixed());
}

TEST_CASE("region maps compare devices cell by cell") {
  RegionFixedParams fixed;
  fixed.epsilon = 1.0;
  fixed.gamma = 1e-3;
  fixed.t_cold = 0.01;
  fixed.chi = 0.4;

  SUBCASE("a device never dominates itself") {
    const RegionMap m = region_compare(
        Device::SingleQubit, Device::SingleQubit, {1.5, 2.5},
        RegionAxis::Delta, {0.0, 0.02}, fixed, EngineMode::Analytic);
    REQUIRE(m.labels.size() == 4);
    for (RegionLabel l : m.labels) {
      CHECK(l == RegionLabel::AlphaDependent);
    }
  }

  SUBCASE("swapping the devices swaps the labels") {
    const std::vector<double> t_hot{0.5, 2.0};
    const std::vector<double> gs{0.3, 0.6};
    const RegionMap fwd =
        region_compare(Device::StrongPair, Device::SingleQubit, t_hot,
                       RegionAxis::G, gs, fixed, EngineMode::Analytic);
    const RegionMap bwd =
        region_compare(Device::SingleQubit, Device::StrongPair, t_hot,
                       RegionAxis::G, gs, fixed, EngineMode::Analytic);
    REQUIRE(fwd.labels.size() == bwd.labels.size());
    for (std::size_t i = 0; i < fwd.labels.size(); ++i) {
      switch (fwd.labels[i]) {
        case RegionLabel::FirstDominates:
          CHECK(bwd.labels[i] == RegionLabel::SecondDominates);
          break;
        case RegionLabel::SecondDominates:
          CHECK(bwd.labels[i] == RegionLabel::FirstDominates);
          break;
        case RegionLabel::AlphaDependent:
          CHECK(bwd.labels[i] == RegionLabel::AlphaDependent);
          break;
      }
    }
  }

  SUBCASE("the exchange-suppressed pair never dominates the single qubit") {
    fixed.delta = 0.0;
    EvalStats stats;
    const RegionMap m = region_compare(
        Device::DetunedPair, Device::SingleQubit, {2.0}, RegionAxis::G,
        {0.0, 0.02, 0.05}, fixed, EngineMode::Numeric, 1, &stats);
    for (RegionLabel l : m.labels) {
      CHECK(l != RegionLabel::FirstDominates);
    }
    CHECK(m.axis == RegionAxis::G);
    CHECK(m.t_hot_values.size() == 1);
    CHECK(m.axis_values.size() == 3);
  }
}
