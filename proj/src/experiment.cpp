#include "rectiflow/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <sstream>
#include <string>
#include <thread>
#include <utility>

#include "json.hpp"
#include "rectiflow/devices.hpp"
#include "rectiflow/rectification.hpp"

namespace rectiflow {

namespace {

using njson = nlohmann::json;

#ifndef RECTIFLOW_VERSION
#define RECTIFLOW_VERSION "0.0.0"
#endif

[[noreturn]] void bad_key(const std::string& path, const std::string& what) {
  throw ConfigError("config key '" + path + "': " + what);
}

std::string joined(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown_keys(const njson& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known =
        std::any_of(allowed.begin(), allowed.end(),
                    [&](const char* k) { return it.key() == k; });
    if (!known) bad_key(joined(path, it.key()), "unknown key");
  }
}

double get_number(const njson& v, const std::string& path) {
  if (!v.is_number()) bad_key(path, "expected a number");
  return v.get<double>();
}

long get_integer(const njson& v, const std::string& path) {
  if (!v.is_number_integer()) bad_key(path, "expected an integer");
  return v.get<long>();
}

std::string get_string(const njson& v, const std::string& path) {
  if (!v.is_string()) bad_key(path, "expected a string");
  return v.get<std::string>();
}

Device parse_device(const njson& v, const std::string& path) {
  const std::string s = get_string(v, path);
  if (s == "A") return Device::SingleQubit;
  if (s == "B") return Device::DetunedPair;
  if (s == "C") return Device::StrongPair;
  bad_key(path, "expected one of \"A\", \"B\", \"C\"");
}

/// A value grid: either an explicit array of numbers or an inclusive
/// uniform range {"min": .., "max": .., "count": n}.
std::vector<double> parse_grid(const njson& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_array()) {
    if (v.empty()) bad_key(path, "grid must be nonempty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(get_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
  }
  if (v.is_object()) {
    reject_unknown_keys(v, path, {"min", "max", "count"});
    if (!v.contains("min") || !v.contains("max") || !v.contains("count")) {
      bad_key(path, "a range needs min, max and count");
    }
    const double lo = get_number(v.at("min"), path + ".min");
    const double hi = get_number(v.at("max"), path + ".max");
    const long count = get_integer(v.at("count"), path + ".count");
    if (count < 1) bad_key(path + ".count", "must be >= 1");
    if (lo > hi) bad_key(path, "min must not exceed max");
    if (count == 1) {
      out.push_back(lo);
      return out;
    }
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      out.push_back(i == count - 1
                        ? hi
                        : lo + (hi - lo) * static_cast<double>(i) /
                                   static_cast<double>(count - 1));
    }
    return out;
  }
  bad_key(path, "expected an array of numbers or {min, max, count}");
}

Interval parse_interval(const njson& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) {
    bad_key(path, "expected an interval [lo, hi]");
  }
  Interval iv{get_number(v[0], path + "[0]"), get_number(v[1], path + "[1]")};
  if (iv.lo > iv.hi) bad_key(path, "interval has lo > hi");
  return iv;
}

njson parse_json_or_throw(const std::string& text, const std::string& what) {
  njson doc = njson::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw ConfigError(what + " is not valid JSON");
  }
  return doc;
}

std::string engine_name(RunEngine e) {
  switch (e) {
    case RunEngine::Analytic: return "analytic";
    case RunEngine::Numeric: return "numeric";
    case RunEngine::Both: return "both";
  }
  return "?";
}

EngineMode single_engine(const ExperimentConfig& cfg,
                         const std::string& command) {
  switch (cfg.engine) {
    case RunEngine::Analytic: return EngineMode::Analytic;
    case RunEngine::Numeric: return EngineMode::Numeric;
    case RunEngine::Both:
      throw ConfigError("engine \"both\" is only supported by the point "
                        "command; pick analytic or numeric for " + command);
  }
  throw ConfigError("invalid engine");
}

std::string hash_hex(const ExperimentConfig& cfg) {
  // The fingerprint identifies the experiment, not the machine: the worker
  // count must never change output bytes, so it is dropped from the hashed
  // form (canonical_text keeps it so overrides accumulate).
  njson doc = parse_json_or_throw(cfg.canonical_text, "configuration");
  doc.erase("threads");
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(doc.dump())));
  return buf;
}

/// Pushes a double through the 12-significant-digit formatter so JSON and
/// CSV carry the same rounded values.
double round12(double value) {
  return std::strtod(format_g12(value).c_str(), nullptr);
}

std::string csv_preamble(const ExperimentConfig& cfg,
                         const std::string& command) {
  std::string text;
  text += "# rectiflow ";
  text += version();
  text += "\n# config ";
  text += hash_hex(cfg);
  text += "\n# command ";
  text += command;
  text += "\n";
  return text;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != 0) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

njson json_meta(const ExperimentConfig& cfg, const std::string& command) {
  njson meta;
  meta["version"] = version();
  meta["config_hash"] = hash_hex(cfg);
  meta["command"] = command;
  return meta;
}

njson stats_json(const EvalStats& stats) {
  njson s;
  s["evaluated"] = stats.evaluated;
  s["infeasible"] = stats.infeasible;
  return s;
}

std::string stats_comment(const EvalStats& stats) {
  return "# evaluated " + std::to_string(stats.evaluated) + " infeasible " +
         std::to_string(stats.infeasible) + "\n";
}

DeviceSpec spec_for(Device device, double epsilon, double delta, double g) {
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

ParameterBox build_box(const ExperimentConfig& cfg, Device device,
                       double t_hot) {
  ParameterBox box =
      default_box(device, cfg.epsilon, cfg.gamma, t_hot, cfg.t_cold);
  if (cfg.box_chi.has_value()) box.chi = *cfg.box_chi;
  if (cfg.box_delta.has_value()) box.delta = *cfg.box_delta;
  if (cfg.box_g.has_value()) box.g = *cfg.box_g;
  return box;
}

OptimizerSettings runtime_settings(const ExperimentConfig& cfg) {
  OptimizerSettings settings = cfg.optimizer;
  settings.threads = resolve_threads(cfg.threads);
  return settings;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

const char* version() { return RECTIFLOW_VERSION; }

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_g12(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RECTIFLOW_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || parsed == 0 || parsed > 4096) {
      throw ConfigError(
          "RECTIFLOW_THREADS must be a positive integer (<= 4096)");
    }
    return static_cast<unsigned>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

ExperimentConfig ExperimentConfig::parse(const std::string& json_text) {
  njson doc = parse_json_or_throw(json_text, "configuration");
  if (!doc.is_object()) {
    throw ConfigError("configuration must be a JSON object");
  }
  reject_unknown_keys(doc, "",
                      {"devices", "engine", "epsilon", "gamma", "t_cold",
                       "t_hot", "t_hot_sweep", "chi", "delta", "g", "alphas",
                       "box", "optimizer", "regions", "threads", "output"});

  ExperimentConfig cfg;
  if (doc.contains("devices")) {
    const njson& arr = doc.at("devices");
    if (!arr.is_array() || arr.empty()) {
      bad_key("devices", "expected a nonempty array of device tags");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Device d =
          parse_device(arr[i], "devices[" + std::to_string(i) + "]");
      if (std::find(cfg.devices.begin(), cfg.devices.end(), d) !=
          cfg.devices.end()) {
        bad_key("devices", "duplicate device tag");
      }
      cfg.devices.push_back(d);
    }
  }
  if (doc.contains("engine")) {
    const std::string s = get_string(doc.at("engine"), "engine");
    if (s == "analytic") cfg.engine = RunEngine::Analytic;
    else if (s == "numeric") cfg.engine = RunEngine::Numeric;
    else if (s == "both") cfg.engine = RunEngine::Both;
    else bad_key("engine", "expected \"analytic\", \"numeric\" or \"both\"");
  }
  if (doc.contains("epsilon")) {
    cfg.epsilon = get_number(doc.at("epsilon"), "epsilon");
    if (!(cfg.epsilon > 0.0)) bad_key("epsilon", "must be positive");
  }
  if (doc.contains("gamma")) {
    cfg.gamma = get_number(doc.at("gamma"), "gamma");
    if (!(cfg.gamma > 0.0)) bad_key("gamma", "must be positive");
  }
  if (doc.contains("t_cold")) {
    cfg.t_cold = get_number(doc.at("t_cold"), "t_cold");
    if (!(cfg.t_cold > 0.0)) bad_key("t_cold", "must be positive");
  }
  if (doc.contains("t_hot")) {
    cfg.t_hot = get_number(doc.at("t_hot"), "t_hot");
    if (!(*cfg.t_hot > 0.0)) bad_key("t_hot", "must be positive");
  }
  if (doc.contains("t_hot_sweep")) {
    cfg.t_hot_sweep = parse_grid(doc.at("t_hot_sweep"), "t_hot_sweep");
    for (double t : cfg.t_hot_sweep) {
      if (!(t > 0.0)) bad_key("t_hot_sweep", "temperatures must be positive");
    }
  }
  if (doc.contains("chi")) {
    cfg.chi = get_number(doc.at("chi"), "chi");
    if (!(*cfg.chi >= -1.0 && *cfg.chi <= 1.0)) {
      bad_key("chi", "must lie in [-1, 1]");
    }
  }
  if (doc.contains("delta")) {
    cfg.delta = get_number(doc.at("delta"), "delta");
    if (!(*cfg.delta >= 0.0)) bad_key("delta", "must be nonnegative");
  }
  if (doc.contains("g")) {
    cfg.g = get_number(doc.at("g"), "g");
    if (!(*cfg.g >= 0.0)) bad_key("g", "must be nonnegative");
  }
  if (doc.contains("alphas")) {
    cfg.alphas = parse_grid(doc.at("alphas"), "alphas");
    for (double a : cfg.alphas) {
      if (!(a >= 0.0 && a <= 1.0)) bad_key("alphas", "must lie in [0, 1]");
    }
  }
  if (doc.contains("box")) {
    const njson& box = doc.at("box");
    if (!box.is_object()) bad_key("box", "expected an object");
    reject_unknown_keys(box, "box", {"chi", "delta", "g"});
    if (box.contains("chi")) {
      cfg.box_chi = parse_interval(box.at("chi"), "box.chi");
    }
    if (box.contains("delta")) {
      cfg.box_delta = parse_interval(box.at("delta"), "box.delta");
    }
    if (box.contains("g")) {
      cfg.box_g = parse_interval(box.at("g"), "box.g");
    }
  }
  if (doc.contains("optimizer")) {
    const njson& opt = doc.at("optimizer");
    if (!opt.is_object()) bad_key("optimizer", "expected an object");
    reject_unknown_keys(opt, "optimizer",
                        {"coarse_points", "refine_rounds", "refine_points",
                         "shrink"});
    if (opt.contains("coarse_points")) {
      const long n = get_integer(opt.at("coarse_points"),
                                 "optimizer.coarse_points");
      if (n < 2 || n > 100000) {
        bad_key("optimizer.coarse_points", "must lie in [2, 100000]");
      }
      cfg.optimizer.coarse_points = static_cast<int>(n);
    }
    if (opt.contains("refine_rounds")) {
      const long n =
          get_integer(opt.at("refine_rounds"), "optimizer.refine_rounds");
      if (n < 0 || n > 64) {
        bad_key("optimizer.refine_rounds", "must lie in [0, 64]");
      }
      cfg.optimizer.refine_rounds = static_cast<int>(n);
    }
    if (opt.contains("refine_points")) {
      const long n =
          get_integer(opt.at("refine_points"), "optimizer.refine_points");
      if (n < 3 || n > 10001 || n % 2 == 0) {
        bad_key("optimizer.refine_points",
                "must be an odd integer in [3, 10001]");
      }
      cfg.optimizer.refine_points = static_cast<int>(n);
    }
    if (opt.contains("shrink")) {
      const double s = get_number(opt.at("shrink"), "optimizer.shrink");
      if (!(s > 0.0 && s < 1.0)) {
        bad_key("optimizer.shrink", "must lie in (0, 1)");
      }
      cfg.optimizer.shrink = s;
    }
  }
  if (doc.contains("regions")) {
    const njson& reg = doc.at("regions");
    if (!reg.is_object()) bad_key("regions", "expected an object");
    reject_unknown_keys(reg, "regions", {"first", "second", "axis", "values"});
    if (reg.contains("first")) {
      cfg.region_first = parse_device(reg.at("first"), "regions.first");
    }
    if (reg.contains("second")) {
      cfg.region_second = parse_device(reg.at("second"), "regions.second");
    }
    if (reg.contains("axis")) {
      const std::string s = get_string(reg.at("axis"), "regions.axis");
      if (s == "delta") cfg.region_axis = RegionAxis::Delta;
      else if (s == "g") cfg.region_axis = RegionAxis::G;
      else bad_key("regions.axis", "expected \"delta\" or \"g\"");
    }
    if (reg.contains("values")) {
      cfg.region_axis_values = parse_grid(reg.at("values"), "regions.values");
      for (double v : cfg.region_axis_values) {
        if (!(v >= 0.0)) bad_key("regions.values", "must be nonnegative");
      }
    }
  }
  if (doc.contains("threads")) {
    const long n = get_integer(doc.at("threads"), "threads");
    if (n < 0 || n > 4096) bad_key("threads", "must lie in [0, 4096]");
    cfg.threads = static_cast<unsigned>(n);
  }
  if (doc.contains("output")) {
    const njson& out = doc.at("output");
    if (!out.is_object()) bad_key("output", "expected an object");
    reject_unknown_keys(out, "output", {"path", "format"});
    if (out.contains("path")) {
      cfg.output_path = get_string(out.at("path"), "output.path");
      if (cfg.output_path.empty()) bad_key("output.path", "must be nonempty");
    }
    if (out.contains("format")) {
      cfg.output_format = get_string(out.at("format"), "output.format");
      if (cfg.output_format != "csv" && cfg.output_format != "json") {
        bad_key("output.format", "expected \"csv\" or \"json\"");
      }
    }
  }
  cfg.canonical_text = doc.dump();
  return cfg;
}

void ExperimentConfig::apply_override(const std::string& dotted_key,
                                      const std::string& json_value) {
  if (dotted_key.empty()) throw ConfigError("override key must be nonempty");
  njson doc = canonical_text.empty()
                  ? njson::object()
                  : parse_json_or_throw(canonical_text, "configuration");
  const njson value =
      parse_json_or_throw(json_value, "override value for '" + dotted_key +
                                          "'");
  std::string pointer = "/" + dotted_key;
  std::replace(pointer.begin(), pointer.end(), '.', '/');
  doc[njson::json_pointer(pointer)] = value;
  *this = parse(doc.dump());
}

namespace {

// ---------------------------------------------------------------------------
// point

struct PointRow {
  Device device = Device::SingleQubit;
  std::string engine;
  double chi = 0.0, delta = 0.0, g = 0.0;
  CurrentPair currents;
  double r = 0.0, j = 0.0;
  std::vector<double> etas;
  bool has_diags = false;
  SteadyStateDiagnostics diags;
  bool has_ratio = false;
  double ratio = 0.0;
};

SteadyStateDiagnostics worst_of(const SteadyStateDiagnostics& a,
                                const SteadyStateDiagnostics& b) {
  SteadyStateDiagnostics w;
  w.trace_error = std::max(a.trace_error, b.trace_error);
  w.herm_error = std::max(a.herm_error, b.herm_error);
  w.min_eigenvalue = std::min(a.min_eigenvalue, b.min_eigenvalue);
  w.residual = std::max(a.residual, b.residual);
  w.energy_balance = std::max(a.energy_balance, b.energy_balance);
  return w;
}

}  // namespace

RunResult run_point(const ExperimentConfig& cfg) {
  require(!cfg.devices.empty(), "point needs at least one device");
  require(cfg.t_hot.has_value(), "point needs t_hot");
  require(cfg.chi.has_value(), "point needs chi");

  RunResult result;
  std::vector<PointRow> rows;
  for (Device device : cfg.devices) {
    const double delta =
        device == Device::DetunedPair ? cfg.delta.value_or(0.0) : 0.0;
    const double g =
        device == Device::SingleQubit ? 0.0 : cfg.g.value_or(0.0);
    const DeviceSpec spec = spec_for(device, cfg.epsilon, delta, g);
    const CouplingConfig coupling{cfg.gamma, *cfg.chi};
    const ThermalScenario scenario{*cfg.t_hot, cfg.t_cold,
                                   Orientation::HotLeft};
    for (const std::string& w : regime_check(spec, coupling)) {
      result.warnings += std::string("device ") + device_tag(device) + ": " +
                         w + "\n";
    }

    std::optional<PointRow> analytic;
    if (cfg.engine == RunEngine::Analytic || cfg.engine == RunEngine::Both) {
      try {
        PointRow row;
        row.device = device;
        row.engine = "analytic";
        row.chi = *cfg.chi;
        row.delta = delta;
        row.g = g;
        row.currents = analytic_currents(spec, coupling, scenario);
        row.r = analytic_rectification(spec, coupling, scenario);
        row.j = max_current(row.currents);
        analytic = std::move(row);
      } catch (const DomainError& e) {
        if (cfg.engine == RunEngine::Analytic ||
            e.kind() != DomainError::Kind::NoAnalyticForm) {
          throw;
        }
        result.warnings += std::string("device ") + device_tag(device) +
                           ": " + e.what() + "\n";
      }
    }
    std::optional<PointRow> numeric;
    if (cfg.engine == RunEngine::Numeric || cfg.engine == RunEngine::Both) {
      PointRow row;
      row.device = device;
      row.engine = "numeric";
      row.chi = *cfg.chi;
      row.delta = delta;
      row.g = g;
      SteadyStateDiagnostics d_hc, d_ch;
      row.currents = bidirectional(spec, coupling, scenario, &d_hc, &d_ch);
      row.r = rectification_factor(row.currents);
      row.j = max_current(row.currents);
      row.has_diags = true;
      row.diags = worst_of(d_hc, d_ch);
      numeric = std::move(row);
    }
    if (analytic.has_value() && numeric.has_value()) {
      const double a = analytic->currents.j_hc;
      const double n = numeric->currents.j_hc;
      if (a != 0.0) {
        numeric->has_ratio = true;
        numeric->ratio = n / a;
      }
    }
    for (auto* row : {&analytic, &numeric}) {
      if (!row->has_value()) continue;
      for (double alpha : cfg.alphas) {
        (*row)->etas.push_back(cop((*row)->r, (*row)->j, alpha));
      }
      rows.push_back(std::move(**row));
    }
  }

  const bool both = cfg.engine == RunEngine::Both;
  std::string csv = csv_preamble(cfg, "point");
  std::vector<std::string> header = {"device", "engine", "T_h",  "chi",
                                     "delta",  "g",      "J_hc", "J_ch",
                                     "R",      "J"};
  for (double alpha : cfg.alphas) header.push_back("eta_" + format_g12(alpha));
  for (const char* h : {"trace_error", "herm_error", "min_eigenvalue",
                        "residual", "energy_balance"}) {
    header.push_back(h);
  }
  if (both) header.push_back("ratio_numeric_analytic");
  csv += join_row(header);

  njson records = njson::array();
  for (const PointRow& row : rows) {
    std::vector<std::string> cells = {device_tag(row.device),
                                      row.engine,
                                      format_g12(*cfg.t_hot),
                                      format_g12(row.chi),
                                      format_g12(row.delta),
                                      format_g12(row.g),
                                      format_g12(row.currents.j_hc),
                                      format_g12(row.currents.j_ch),
                                      format_g12(row.r),
                                      format_g12(row.j)};
    for (double eta : row.etas) cells.push_back(format_g12(eta));
    if (row.has_diags) {
      cells.push_back(format_g12(row.diags.trace_error));
      cells.push_back(format_g12(row.diags.herm_error));
      cells.push_back(format_g12(row.diags.min_eigenvalue));
      cells.push_back(format_g12(row.diags.residual));
      cells.push_back(format_g12(row.diags.energy_balance));
    } else {
      for (int i = 0; i < 5; ++i) cells.emplace_back();
    }
    if (both) {
      cells.push_back(row.has_ratio ? format_g12(row.ratio) : std::string());
    }
    csv += join_row(cells);

    njson rec;
    rec["device"] = device_tag(row.device);
    rec["engine"] = row.engine;
    rec["T_h"] = round12(*cfg.t_hot);
    rec["chi"] = round12(row.chi);
    rec["delta"] = round12(row.delta);
    rec["g"] = round12(row.g);
    rec["J_hc"] = round12(row.currents.j_hc);
    rec["J_ch"] = round12(row.currents.j_ch);
    rec["R"] = round12(row.r);
    rec["J"] = round12(row.j);
    if (!cfg.alphas.empty()) {
      njson etas = njson::array();
      for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
        njson e;
        e["alpha"] = round12(cfg.alphas[i]);
        e["eta"] = round12(row.etas[i]);
        etas.push_back(std::move(e));
      }
      rec["eta"] = std::move(etas);
    }
    if (row.has_diags) {
      njson d;
      d["trace_error"] = round12(row.diags.trace_error);
      d["herm_error"] = round12(row.diags.herm_error);
      d["min_eigenvalue"] = round12(row.diags.min_eigenvalue);
      d["residual"] = round12(row.diags.residual);
      d["energy_balance"] = round12(row.diags.energy_balance);
      rec["diagnostics"] = std::move(d);
    }
    if (row.has_ratio) rec["ratio_numeric_analytic"] = round12(row.ratio);
    records.push_back(std::move(rec));
  }

  njson out = json_meta(cfg, "point");
  out["engine"] = engine_name(cfg.engine);
  out["records"] = std::move(records);
  result.csv = std::move(csv);
  result.json = out.dump(2) + "\n";
  return result;
}

// ---------------------------------------------------------------------------
// tradeoff

RunResult run_tradeoff(const ExperimentConfig& cfg) {
  require(!cfg.devices.empty(), "tradeoff needs at least one device");
  require(!cfg.t_hot_sweep.empty(), "tradeoff needs a t_hot_sweep");
  require(!cfg.alphas.empty(), "tradeoff needs an alpha grid");
  const EngineMode engine = single_engine(cfg, "tradeoff");
  const OptimizerSettings settings = runtime_settings(cfg);

  RunResult result;
  EvalStats stats;
  const bool tag_device = cfg.devices.size() > 1;

  std::string csv = csv_preamble(cfg, "tradeoff");
  std::vector<std::string> header;
  if (tag_device) header.push_back("device");
  for (const char* h :
       {"T_h", "alpha", "chi_opt", "delta_opt", "g_opt", "J", "R", "eta"}) {
    header.push_back(h);
  }
  csv += join_row(header);

  njson rows = njson::array();
  for (Device device : cfg.devices) {
    for (double t_hot : cfg.t_hot_sweep) {
      const ParameterBox box = build_box(cfg, device, t_hot);
      for (double alpha : cfg.alphas) {
        PerformancePoint p;
        try {
          p = maximize_cop(device, box, alpha, engine, settings, &stats);
        } catch (const DomainError& e) {
          result.warnings += std::string("device ") + device_tag(device) +
                             " T_h=" + format_g12(t_hot) +
                             " alpha=" + format_g12(alpha) +
                             ": skipped: " + e.what() + "\n";
          continue;
        }
        std::vector<std::string> cells;
        if (tag_device) cells.emplace_back(device_tag(device));
        cells.push_back(format_g12(t_hot));
        cells.push_back(format_g12(alpha));
        cells.push_back(format_g12(p.chi));
        cells.push_back(format_g12(p.delta));
        cells.push_back(format_g12(p.g));
        cells.push_back(format_g12(p.j));
        cells.push_back(format_g12(p.r));
        cells.push_back(format_g12(p.eta));
        csv += join_row(cells);

        njson row;
        row["device"] = device_tag(device);
        row["T_h"] = round12(t_hot);
        row["alpha"] = round12(alpha);
        row["chi_opt"] = round12(p.chi);
        row["delta_opt"] = round12(p.delta);
        row["g_opt"] = round12(p.g);
        row["J"] = round12(p.j);
        row["R"] = round12(p.r);
        row["eta"] = round12(p.eta);
        rows.push_back(std::move(row));
      }
    }
  }
  csv += stats_comment(stats);

  njson out = json_meta(cfg, "tradeoff");
  out["engine"] = engine_name(cfg.engine);
  out["rows"] = std::move(rows);
  out["stats"] = stats_json(stats);
  result.csv = std::move(csv);
  result.json = out.dump(2) + "\n";
  return result;
}

// ---------------------------------------------------------------------------
// pareto

RunResult run_pareto(const ExperimentConfig& cfg) {
  require(!cfg.devices.empty(), "pareto needs at least one device");
  require(cfg.t_hot.has_value(), "pareto needs t_hot");
  require(!cfg.alphas.empty(), "pareto needs an alpha grid");
  const EngineMode engine = single_engine(cfg, "pareto");
  OptimizerSettings settings = runtime_settings(cfg);

  RunResult result;
  EvalStats stats;

  std::string csv = csv_preamble(cfg, "pareto");
  csv += join_row({"device", "J", "R", "alpha_winner", "chi", "delta", "g"});

  njson devices = njson::array();
  for (Device device : cfg.devices) {
    const ParameterBox box = build_box(cfg, device, *cfg.t_hot);
    EvalStats device_stats;
    ParetoResult pr;
    try {
      pr = pareto_front(device, box, cfg.alphas, engine, settings);
    } catch (const DomainError& e) {
      result.warnings += std::string("device ") + device_tag(device) +
                         ": skipped: " + e.what() + "\n";
      continue;
    }
    device_stats = pr.stats;
    stats.evaluated += pr.stats.evaluated;
    stats.infeasible += pr.stats.infeasible;

    for (const PerformancePoint& p : pr.front) {
      csv += join_row({device_tag(device), format_g12(p.j), format_g12(p.r),
                       p.alpha_winner.has_value()
                           ? format_g12(*p.alpha_winner)
                           : std::string(),
                       format_g12(p.chi), format_g12(p.delta),
                       format_g12(p.g)});
    }

    njson eta_max = njson::array();
    for (const PerformancePoint& w : pr.winners) {
      njson e;
      e["alpha"] = round12(w.alpha);
      e["eta"] = round12(w.eta);
      e["J"] = round12(w.j);
      e["R"] = round12(w.r);
      e["chi"] = round12(w.chi);
      e["delta"] = round12(w.delta);
      e["g"] = round12(w.g);
      eta_max.push_back(std::move(e));
    }
    njson dev;
    dev["device"] = device_tag(device);
    dev["front_size"] = pr.front.size();
    dev["eta_max"] = std::move(eta_max);
    dev["stats"] = stats_json(device_stats);
    devices.push_back(std::move(dev));
  }
  csv += stats_comment(stats);

  njson out = json_meta(cfg, "pareto");
  out["engine"] = engine_name(cfg.engine);
  out["T_h"] = round12(*cfg.t_hot);
  out["devices"] = std::move(devices);
  out["stats"] = stats_json(stats);
  result.csv = std::move(csv);
  result.json = out.dump(2) + "\n";
  return result;
}

// ---------------------------------------------------------------------------
// regions

RunResult run_regions(const ExperimentConfig& cfg) {
  require(cfg.region_first.has_value() && cfg.region_second.has_value(),
          "regions needs regions.first and regions.second");
  require(cfg.region_axis.has_value(), "regions needs regions.axis");
  require(!cfg.region_axis_values.empty(), "regions needs regions.values");
  require(!cfg.t_hot_sweep.empty(), "regions needs a t_hot_sweep");
  require(cfg.chi.has_value(), "regions needs chi");
  const EngineMode engine = single_engine(cfg, "regions");

  RegionFixedParams fixed;
  fixed.epsilon = cfg.epsilon;
  fixed.gamma = cfg.gamma;
  fixed.t_cold = cfg.t_cold;
  fixed.chi = *cfg.chi;
  fixed.delta = cfg.delta.value_or(0.0);
  fixed.g = cfg.g.value_or(0.0);

  EvalStats stats;
  const RegionMap map = region_compare(
      *cfg.region_first, *cfg.region_second, cfg.t_hot_sweep,
      *cfg.region_axis, cfg.region_axis_values, fixed, engine,
      resolve_threads(cfg.threads), &stats);

  const char* axis_name =
      map.axis == RegionAxis::Delta ? "delta" : "g";
  RunResult result;
  std::string csv = csv_preamble(cfg, "regions");
  csv += join_row({"T_h", axis_name, "label"});
  njson cells = njson::array();
  for (std::size_t i = 0; i < map.t_hot_values.size(); ++i) {
    for (std::size_t k = 0; k < map.axis_values.size(); ++k) {
      const char* label = region_label_tag(map.at(i, k));
      csv += join_row({format_g12(map.t_hot_values[i]),
                       format_g12(map.axis_values[k]), label});
      njson cell;
      cell["T_h"] = round12(map.t_hot_values[i]);
      cell[axis_name] = round12(map.axis_values[k]);
      cell["label"] = label;
      cells.push_back(std::move(cell));
    }
  }
  csv += stats_comment(stats);

  njson out = json_meta(cfg, "regions");
  out["engine"] = engine_name(cfg.engine);
  out["first"] = device_tag(*cfg.region_first);
  out["second"] = device_tag(*cfg.region_second);
  out["axis"] = axis_name;
  out["cells"] = std::move(cells);
  out["stats"] = stats_json(stats);
  result.csv = std::move(csv);
  result.json = out.dump(2) + "\n";
  return result;
}

RunResult run_command(const ExperimentConfig& config,
                      const std::string& command) {
  if (command == "point") return run_point(config);
  if (command == "tradeoff") return run_tradeoff(config);
  if (command == "pareto") return run_pareto(config);
  if (command == "regions") return run_regions(config);
  throw ConfigError("unknown command '" + command +
                    "'; expected point, tradeoff, pareto or regions");
}

}  // namespace rectiflow
