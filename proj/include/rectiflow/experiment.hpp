// Experiment layer: strict JSON configuration, command dispatch, and
// deterministic CSV/JSON emission. Identical configuration yields
// byte-identical output: floats are printed with 12 significant digits, and
// every file carries a header with the configuration hash and the library
// version (never a timestamp).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rectiflow/pareto.hpp"
#include "rectiflow/types.hpp"

namespace rectiflow {

/// Library version string (from the build).
const char* version();

/// FNV-1a 64-bit hash, used to fingerprint configurations in output headers.
std::uint64_t fnv1a64(const std::string& text);

/// Deterministic float formatting: %.12g.
std::string format_g12(double value);

/// Worker-count resolution: explicit value if > 0, else the
/// RECTIFLOW_THREADS environment variable, else the hardware concurrency
/// (at least 1).
unsigned resolve_threads(unsigned requested);

/// How a command scores points: closed forms, steady-state engine, or both
/// side by side (Both adds a numeric/analytic ratio column where a closed
/// form exists).
enum class RunEngine { Analytic, Numeric, Both };

/// Parsed and validated experiment configuration. Unknown keys anywhere in
/// the document are rejected; command-specific requirements are checked at
/// dispatch time.
struct ExperimentConfig {
  // Devices the command operates on (one or more); regions commands instead
  // use the explicit first/second pair below.
  std::vector<Device> devices;
  RunEngine engine = RunEngine::Numeric;

  double epsilon = 1.0;
  double gamma = 1e-3;
  double t_cold = 0.01;

  // Single hot temperature (point, pareto) ...
  std::optional<double> t_hot;
  // ... or a sweep (tradeoff, regions).
  std::vector<double> t_hot_sweep;

  // Fixed operating parameters for `point` and for region maps.
  std::optional<double> chi;
  std::optional<double> delta;
  std::optional<double> g;

  // Scalarization weights: explicit list, or a uniform grid.
  std::vector<double> alphas;

  // Optimization boxes per device family; absent entries fall back to the
  // bundled defaults.
  std::optional<Interval> box_chi;
  std::optional<Interval> box_delta;
  std::optional<Interval> box_g;

  OptimizerSettings optimizer;

  // Region-map inputs.
  std::optional<Device> region_first;
  std::optional<Device> region_second;
  std::optional<RegionAxis> region_axis;
  std::vector<double> region_axis_values;

  unsigned threads = 0;  // 0 = resolve from environment/hardware

  std::string output_path = "-";  // "-" = stdout
  std::string output_format = "csv";  // csv | json

  // Canonical serialization of the parsed document; hashed into output
  // headers so identical configurations are provably identical runs.
  std::string canonical_text;

  /// Parses and validates a JSON document. Throws ConfigError with the
  /// offending key path on any problem.
  static ExperimentConfig parse(const std::string& json_text);

  /// Applies a dotted-path override with a JSON-encoded value (CLI flags),
  /// e.g. ("engine", "\"analytic\"") or ("t_hot", "2.0"). Re-validates.
  void apply_override(const std::string& dotted_key,
                      const std::string& json_value);
};

/// Output of one command run.
struct RunResult {
  std::string csv;           // primary tabular output
  std::string json;          // JSON rendering / summary
  std::string warnings;      // regime advisories etc., one per line
};

/// Dispatches one of: point, tradeoff, pareto, regions.
/// Throws ConfigError for an unknown command or a configuration that lacks
/// the command's required fields; physics errors propagate untouched.
RunResult run_command(const ExperimentConfig& config,
                      const std::string& command);

RunResult run_point(const ExperimentConfig& config);
RunResult run_tradeoff(const ExperimentConfig& config);
RunResult run_pareto(const ExperimentConfig& config);
RunResult run_regions(const ExperimentConfig& config);

}  // namespace rectiflow
