#include "rectiflow/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>
#include <utility>

namespace rectiflow {

namespace {

// Smallest numerically resolved current (gamma*epsilon units) the optimizer
// accepts as a usable signal.  At full asymmetry both currents collapse to
// solver noise (~1e-14) that can straddle the zero-current threshold and
// alias into rectification values near or even above 1; such cells are
// infeasible, not front material.  The analytic engine is exempt: its
// boundary values are exact limits, not noise.
constexpr double kNumericCurrentFloor = 1e-12;

enum class GridParam { Chi, Delta, G };

struct DimSpec {
  GridParam param;
  Interval iv;
};

/// Every parameter the device family actually carries becomes a grid
/// dimension; pinned intervals collapse to a single value.
std::vector<DimSpec> active_dims(Device device, const ParameterBox& box) {
  std::vector<DimSpec> dims{{GridParam::Chi, box.chi}};
  if (device == Device::DetunedPair) {
    dims.push_back({GridParam::Delta, box.delta});
  }
  if (device != Device::SingleQubit) {
    dims.push_back({GridParam::G, box.g});
  }
  return dims;
}

std::vector<double> grid_values(const Interval& iv, int n) {
  if (iv.fixed()) return {iv.lo};
  if (n < 2) return {0.5 * (iv.lo + iv.hi)};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] =
        (i == n - 1) ? iv.hi : iv.lo + (iv.hi - iv.lo) * i / (n - 1);
  }
  return v;
}

void validate_box(const ParameterBox& box) {
  if (!(box.epsilon > 0.0)) throw ConfigError("box epsilon must be positive");
  if (!(box.gamma > 0.0)) throw ConfigError("box gamma must be positive");
  if (!(box.t_hot > 0.0) || !(box.t_cold > 0.0)) {
    throw ConfigError("box temperatures must be positive");
  }
  for (const Interval* iv : {&box.chi, &box.delta, &box.g}) {
    if (iv->lo > iv->hi) {
      throw ConfigError("box interval has lo > hi");
    }
  }
}

struct EvalContext {
  Device device = Device::SingleQubit;
  const ParameterBox* box = nullptr;
  EngineMode engine = EngineMode::Analytic;
};

DeviceSpec make_spec(Device device, double epsilon, double delta, double g) {
  switch (device) {
    case Device::SingleQubit:
      return DeviceSpec::single_qubit(epsilon);
    case Device::DetunedPair:
      return DeviceSpec::detuned_pair(epsilon, delta, g);
    case Device::StrongPair:
      return DeviceSpec::strong_pair(epsilon, g);
  }
  throw err::invalid_spec("unknown device family");
}

/// Scores one parameter point; nullopt when the physics layer rejects it
/// (domain corners, equilibrium, degenerate steady states, numeric trouble).
std::optional<PerformancePoint> evaluate(const EvalContext& ctx, double chi,
                                         double delta, double g) {
  if (ctx.device == Device::SingleQubit) {
    delta = 0.0;
    g = 0.0;
  } else if (ctx.device == Device::StrongPair) {
    delta = 0.0;
  }
  try {
    const DeviceSpec spec =
        make_spec(ctx.device, ctx.box->epsilon, delta, g);
    const CouplingConfig coupling{ctx.box->gamma, chi};
    const ThermalScenario scenario{ctx.box->t_hot, ctx.box->t_cold,
                                   Orientation::HotLeft};
    double j = 0.0;
    double r = 0.0;
    if (ctx.engine == EngineMode::Analytic) {
      const CurrentPair c = analytic_currents(spec, coupling, scenario);
      j = max_current(c);
      r = analytic_rectification(spec, coupling, scenario);
    } else {
      const CurrentPair c = bidirectional(spec, coupling, scenario);
      j = max_current(c);
      if (j < kNumericCurrentFloor) {
        return std::nullopt;
      }
      r = rectification_factor(c);
    }
    if (!std::isfinite(j) || !std::isfinite(r)) {
      return std::nullopt;
    }
    PerformancePoint p;
    p.j = j;
    p.r = r;
    p.chi = chi;
    p.delta = delta;
    p.g = g;
    p.t_hot = ctx.box->t_hot;
    p.device = ctx.device;
    return p;
  } catch (const DomainError&) {
    return std::nullopt;
  } catch (const NumericError&) {
    return std::nullopt;
  }
}

/// Evaluates the cartesian grid spanned by `values` (one vector per dim, in
/// `dims` order) and appends the feasible points to `cloud` in index order.
/// Slot-based so the result is identical for any worker count.
void eval_grid(const EvalContext& ctx, const std::vector<DimSpec>& dims,
               const std::vector<std::vector<double>>& values,
               unsigned threads, std::vector<PerformancePoint>& cloud,
               EvalStats& stats) {
  std::size_t total = 1;
  for (const auto& v : values) total *= v.size();
  if (total == 0) return;

  auto decode = [&](std::size_t idx, double& chi, double& delta, double& g) {
    for (std::size_t k = values.size(); k-- > 0;) {
      const double v = values[k][idx % values[k].size()];
      idx /= values[k].size();
      switch (dims[k].param) {
        case GridParam::Chi: chi = v; break;
        case GridParam::Delta: delta = v; break;
        case GridParam::G: g = v; break;
      }
    }
  };

  std::vector<std::optional<PerformancePoint>> slots(total);
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double chi = 0.0, delta = 0.0, g = 0.0;
      decode(i, chi, delta, g);
      slots[i] = evaluate(ctx, chi, delta, g);
    }
  };

  const unsigned nthreads = std::max(1u, threads);
  if (nthreads == 1 || total < 2 * nthreads) {
    worker(0, total);
  } else {
    const std::size_t chunk = (total + nthreads - 1) / nthreads;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
      const std::size_t begin = std::min<std::size_t>(t * chunk, total);
      const std::size_t end = std::min<std::size_t>(begin + chunk, total);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  cloud.reserve(cloud.size() + total);
  for (auto& slot : slots) {
    ++stats.evaluated;
    if (slot.has_value()) {
      cloud.push_back(*std::move(slot));
    } else {
      ++stats.infeasible;
    }
  }
}

bool lex_less(const PerformancePoint& a, const PerformancePoint& b) {
  if (a.chi != b.chi) return a.chi < b.chi;
  if (a.delta != b.delta) return a.delta < b.delta;
  return a.g < b.g;
}

/// Index of the cloud point maximizing `score`, ties broken by lexicographic
/// (chi, delta, g). Order-independent total order, so any evaluation or
/// append order yields the same winner.
template <typename ScoreFn>
std::size_t argmax_index(const std::vector<PerformancePoint>& cloud,
                         ScoreFn&& score) {
  std::size_t best = 0;
  double best_score = score(cloud[0]);
  for (std::size_t i = 1; i < cloud.size(); ++i) {
    const double s = score(cloud[i]);
    if (s > best_score ||
        (s == best_score && lex_less(cloud[i], cloud[best]))) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

double param_of(const PerformancePoint& p, GridParam param) {
  switch (param) {
    case GridParam::Chi: return p.chi;
    case GridParam::Delta: return p.delta;
    case GridParam::G: return p.g;
  }
  return 0.0;
}

/// Refinement grid for one round: each free dimension shrinks to
/// width * shrink^round, centered on the incumbent and clamped to the box.
std::vector<std::vector<double>> refine_values(
    const std::vector<DimSpec>& dims, const PerformancePoint& incumbent,
    int round, const OptimizerSettings& settings) {
  std::vector<std::vector<double>> values;
  values.reserve(dims.size());
  const double factor = std::pow(settings.shrink, round);
  for (const DimSpec& dim : dims) {
    if (dim.iv.fixed()) {
      values.push_back({dim.iv.lo});
      continue;
    }
    const double center = param_of(incumbent, dim.param);
    const double half = 0.5 * (dim.iv.hi - dim.iv.lo) * factor;
    Interval local{std::max(dim.iv.lo, center - half),
                   std::min(dim.iv.hi, center + half)};
    values.push_back(grid_values(local, settings.refine_points));
  }
  return values;
}

bool all_fixed(const std::vector<DimSpec>& dims) {
  return std::all_of(dims.begin(), dims.end(),
                     [](const DimSpec& d) { return d.iv.fixed(); });
}

/// Shared skeleton: coarse grid, then per-round refinement chasing the
/// incumbent under `score`, everything pooled into `cloud`.
template <typename ScoreFn>
void run_search(const EvalContext& ctx, const std::vector<DimSpec>& dims,
                const OptimizerSettings& settings, ScoreFn&& score,
                std::vector<PerformancePoint>& cloud, EvalStats& stats) {
  std::vector<std::vector<double>> coarse;
  coarse.reserve(dims.size());
  for (const DimSpec& dim : dims) {
    coarse.push_back(grid_values(dim.iv, settings.coarse_points));
  }
  eval_grid(ctx, dims, coarse, settings.threads, cloud, stats);
  if (cloud.empty() || all_fixed(dims)) return;
  for (int round = 1; round <= settings.refine_rounds; ++round) {
    const PerformancePoint& incumbent = cloud[argmax_index(cloud, score)];
    const auto values = refine_values(dims, incumbent, round, settings);
    eval_grid(ctx, dims, values, settings.threads, cloud, stats);
  }
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw err::invalid_spec("the trade-off weight alpha must lie in [0, 1]");
  }
}

PerformancePoint finish_winner(const PerformancePoint& p, double alpha) {
  PerformancePoint w = p;
  w.alpha = alpha;
  w.eta = alpha * w.r + (1.0 - alpha) * w.j;
  return w;
}

}  // namespace

ParameterBox default_box(Device device, double epsilon, double gamma,
                         double t_hot, double t_cold) {
  ParameterBox box;
  box.epsilon = epsilon;
  box.gamma = gamma;
  box.t_hot = t_hot;
  box.t_cold = t_cold;
  box.chi = {0.0, 1.0};
  switch (device) {
    case Device::SingleQubit:
      break;
    case Device::DetunedPair:
      box.delta = {0.0, 0.1 * epsilon};
      box.g = {0.0, 0.05 * epsilon};
      break;
    case Device::StrongPair:
      box.g = {0.1 * epsilon, 0.95 * epsilon};
      break;
  }
  return box;
}

std::vector<PerformancePoint> nondominated_filter(
    std::vector<PerformancePoint> points, double tol) {
  const std::size_t n = points.size();
  if (n == 0) return points;

  // Descending-J sweep: a point is dominated iff some point with
  // J >= J_p + tol also has R >= R_p + tol. Tracking the running max R over
  // the prefix of sufficiently-larger-J points makes this O(n log n).
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].j != points[b].j) return points[a].j > points[b].j;
    return a < b;
  });

  std::vector<char> dominated(n, 0);
  std::size_t take = 0;
  double max_r = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = order[i];
    while (take < n && points[order[take]].j >= points[p].j + tol) {
      max_r = std::max(max_r, points[order[take]].r);
      ++take;
    }
    if (max_r >= points[p].r + tol) dominated[p] = 1;
  }

  std::vector<std::size_t> keep;
  keep.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!dominated[i]) keep.push_back(i);
  }
  std::stable_sort(keep.begin(), keep.end(),
                   [&](std::size_t a, std::size_t b) {
                     return points[a].j < points[b].j;
                   });
  std::vector<PerformancePoint> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(points[i]);
  return out;
}

PerformancePoint maximize_cop(Device device, const ParameterBox& box,
                              double alpha, EngineMode engine,
                              const OptimizerSettings& settings,
                              EvalStats* stats) {
  check_alpha(alpha);
  validate_box(box);
  EvalStats fallback;
  EvalStats& st = stats != nullptr ? *stats : fallback;
  const EvalContext ctx{device, &box, engine};
  const auto dims = active_dims(device, box);
  const auto score = [alpha](const PerformancePoint& p) {
    return alpha * p.r + (1.0 - alpha) * p.j;
  };
  std::vector<PerformancePoint> cloud;
  run_search(ctx, dims, settings, score, cloud, st);
  if (cloud.empty()) {
    throw err::all_infeasible(
        "every grid point in the parameter box failed to evaluate");
  }
  return finish_winner(cloud[argmax_index(cloud, score)], alpha);
}

ParetoResult pareto_front(Device device, const ParameterBox& box,
                          const std::vector<double>& alpha_grid,
                          EngineMode engine,
                          const OptimizerSettings& settings) {
  if (alpha_grid.empty()) {
    throw err::invalid_spec("the alpha grid must be nonempty");
  }
  for (double a : alpha_grid) check_alpha(a);
  validate_box(box);

  ParetoResult result;
  const EvalContext ctx{device, &box, engine};
  const auto dims = active_dims(device, box);

  // One shared coarse cloud, then per-alpha local refinement chasing that
  // alpha's incumbent; every evaluation lands in the same pool.
  std::vector<PerformancePoint> cloud;
  std::vector<std::vector<double>> coarse;
  coarse.reserve(dims.size());
  for (const DimSpec& dim : dims) {
    coarse.push_back(grid_values(dim.iv, settings.coarse_points));
  }
  eval_grid(ctx, dims, coarse, settings.threads, cloud, result.stats);
  if (cloud.empty()) {
    throw err::all_infeasible(
        "every grid point in the parameter box failed to evaluate");
  }
  if (!all_fixed(dims)) {
    for (double alpha : alpha_grid) {
      const auto score = [alpha](const PerformancePoint& p) {
        return alpha * p.r + (1.0 - alpha) * p.j;
      };
      for (int round = 1; round <= settings.refine_rounds; ++round) {
        const PerformancePoint& incumbent =
            cloud[argmax_index(cloud, score)];
        const auto values = refine_values(dims, incumbent, round, settings);
        eval_grid(ctx, dims, values, settings.threads, cloud, result.stats);
      }
    }
  }

  // Winners re-selected over the full pooled cloud; each winner tags its
  // cloud point with the smallest alpha it wins.
  std::vector<std::size_t> winner_idx;
  winner_idx.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    const auto score = [alpha](const PerformancePoint& p) {
      return alpha * p.r + (1.0 - alpha) * p.j;
    };
    winner_idx.push_back(argmax_index(cloud, score));
  }
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    auto& tag = cloud[winner_idx[i]].alpha_winner;
    if (!tag.has_value() || alpha_grid[i] < *tag) tag = alpha_grid[i];
  }
  result.winners.reserve(alpha_grid.size());
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    result.winners.push_back(
        finish_winner(cloud[winner_idx[i]], alpha_grid[i]));
  }
  result.front = nondominated_filter(std::move(cloud), kDominanceTol);
  return result;
}

std::vector<PerformancePoint> tradeoff_curve(
    Device device, const std::vector<double>& t_hot_sweep, double alpha,
    double epsilon, double gamma, double t_cold, EngineMode engine,
    const OptimizerSettings& settings, EvalStats* stats) {
  check_alpha(alpha);
  std::vector<PerformancePoint> out;
  out.reserve(t_hot_sweep.size());
  for (double t_hot : t_hot_sweep) {
    const ParameterBox box =
        default_box(device, epsilon, gamma, t_hot, t_cold);
    try {
      out.push_back(
          maximize_cop(device, box, alpha, engine, settings, stats));
    } catch (const DomainError&) {
      // Whole box infeasible at this temperature (e.g. equilibrium): skip
      // the row; the eval stats already account for the attempts.
    }
  }
  return out;
}

PerformancePoint max_r_given_j(Device device, const ParameterBox& box,
                               double j_min, EngineMode engine,
                               const OptimizerSettings& settings,
                               EvalStats* stats) {
  if (!(j_min >= 0.0)) {
    throw err::invalid_spec("the current floor j_min must be nonnegative");
  }
  validate_box(box);
  EvalStats fallback;
  EvalStats& st = stats != nullptr ? *stats : fallback;
  const EvalContext ctx{device, &box, engine};
  const auto dims = active_dims(device, box);

  // Constrained points are scored by R; while none satisfies the constraint
  // the incumbent chases the largest J instead, pulling refinement toward
  // feasibility.
  const auto score = [j_min](const PerformancePoint& p) {
    return p.j >= j_min ? 2.0 + p.r : std::tanh(p.j);
  };
  std::vector<PerformancePoint> cloud;
  run_search(ctx, dims, settings, score, cloud, st);
  if (cloud.empty()) {
    throw err::all_infeasible(
        "every grid point in the parameter box failed to evaluate");
  }
  const PerformancePoint& best = cloud[argmax_index(cloud, score)];
  if (best.j < j_min) {
    throw err::infeasible(
        "no evaluated point meets the minimum-current constraint");
  }
  return finish_winner(best, 1.0);
}

RegionMap region_compare(Device first, Device second,
                         const std::vector<double>& t_hot_values,
                         RegionAxis axis,
                         const std::vector<double>& axis_values,
                         const RegionFixedParams& fixed, EngineMode engine,
                         unsigned threads, EvalStats* stats) {
  if (t_hot_values.empty() || axis_values.empty()) {
    throw err::invalid_spec("region grids must be nonempty");
  }
  EvalStats fallback;
  EvalStats& st = stats != nullptr ? *stats : fallback;

  RegionMap map;
  map.t_hot_values = t_hot_values;
  map.axis_values = axis_values;
  map.axis = axis;
  const std::size_t rows = t_hot_values.size();
  const std::size_t cols = axis_values.size();
  map.labels.assign(rows * cols, RegionLabel::AlphaDependent);

  struct CellCount {
    unsigned evaluated = 0;
    unsigned infeasible = 0;
  };
  std::vector<CellCount> counts(rows * cols);

  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t cell = begin; cell < end; ++cell) {
      const double t_hot = t_hot_values[cell / cols];
      const double axis_val = axis_values[cell % cols];
      ParameterBox box;
      box.epsilon = fixed.epsilon;
      box.gamma = fixed.gamma;
      box.t_hot = t_hot;
      box.t_cold = fixed.t_cold;
      const EvalContext first_ctx{first, &box, engine};
      const EvalContext second_ctx{second, &box, engine};
      const double delta = axis == RegionAxis::Delta ? axis_val : fixed.delta;
      const double g = axis == RegionAxis::G ? axis_val : fixed.g;
      counts[cell].evaluated = 2;
      const auto p1 = evaluate(first_ctx, fixed.chi, delta, g);
      const auto p2 = evaluate(second_ctx, fixed.chi, delta, g);
      if (!p1.has_value()) ++counts[cell].infeasible;
      if (!p2.has_value()) ++counts[cell].infeasible;
      if (!p1.has_value() || !p2.has_value()) continue;  // stays ALPHA
      if (p1->j > p2->j + kDominanceTol && p1->r > p2->r + kDominanceTol) {
        map.labels[cell] = RegionLabel::FirstDominates;
      } else if (p2->j > p1->j + kDominanceTol &&
                 p2->r > p1->r + kDominanceTol) {
        map.labels[cell] = RegionLabel::SecondDominates;
      }
    }
  };

  const std::size_t total = rows * cols;
  const unsigned nthreads = std::max(1u, threads);
  if (nthreads == 1 || total < 2 * nthreads) {
    worker(0, total);
  } else {
    const std::size_t chunk = (total + nthreads - 1) / nthreads;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
      const std::size_t begin = std::min<std::size_t>(t * chunk, total);
      const std::size_t end = std::min<std::size_t>(begin + chunk, total);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  for (const CellCount& c : counts) {
    st.evaluated += c.evaluated;
    st.infeasible += c.infeasible;
  }
  return map;
}

}  // namespace rectiflow
