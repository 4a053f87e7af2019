// Command-line front end. Talks to the simulator exclusively through the
// C API of the shared library; all it adds is argument parsing, config-file
// loading, and result emission.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rectiflow.h"

namespace {

struct ConfigDeleter {
  void operator()(rf_config* c) const { rf_config_free(c); }
};
struct ResultDeleter {
  void operator()(rf_result* r) const { rf_result_free(r); }
};
using ConfigHandle = std::unique_ptr<rf_config, ConfigDeleter>;
using ResultHandle = std::unique_ptr<rf_result, ResultDeleter>;

/// Options shared by every subcommand; CLI flags override config fields.
struct CommonFlags {
  std::string config_path;
  std::vector<std::string> devices;
  std::string engine;
  std::string alpha_grid;
  std::string out_path;
  std::string format;
  unsigned threads = 0;
  bool threads_given = false;
  std::vector<std::string> sets;
};

void add_common_flags(CLI::App* sub, CommonFlags* flags) {
  sub->add_option("-c,--config", flags->config_path,
                  "JSON experiment configuration file");
  sub->add_option("--device", flags->devices,
                  "Device family (A, B or C); repeat for several")
      ->check(CLI::IsMember({"A", "B", "C"}));
  sub->add_option("--engine", flags->engine,
                  "Evaluation engine: analytic, numeric or both")
      ->check(CLI::IsMember({"analytic", "numeric", "both"}));
  sub->add_option(
      "--alpha-grid", flags->alpha_grid,
      "Trade-off weights: a count N (uniform grid on [0,1]) or a "
      "comma-separated list");
  sub->add_option("-o,--out", flags->out_path,
                  "Output path ('-' for stdout)");
  sub->add_option("--format", flags->format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", flags->threads,
                  "Worker threads (default: RECTIFLOW_THREADS, then "
                  "hardware concurrency)");
  sub->add_option("--set", flags->sets,
                  "Generic config override key=JSON-value; repeatable");
}

std::string json_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c; break;
    }
  }
  out += '"';
  return out;
}

bool is_count(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

[[noreturn]] void fail(rf_status status) {
  std::cerr << "rectiflow: error: " << rf_last_error() << "\n";
  std::exit(static_cast<int>(status));
}

void check(rf_status status) {
  if (status != RF_OK) fail(status);
}

int run(const std::string& command, const CommonFlags& flags) {
  std::string text = "{}";
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path, std::ios::binary);
    if (!in) {
      std::cerr << "rectiflow: error: cannot read config file '"
                << flags.config_path << "'\n";
      return 1;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }

  rf_config* raw = nullptr;
  check(rf_config_parse(text.c_str(), &raw));
  ConfigHandle config(raw);

  if (!flags.devices.empty()) {
    std::string value = "[";
    for (std::size_t i = 0; i < flags.devices.size(); ++i) {
      if (i != 0) value += ',';
      value += json_quote(flags.devices[i]);
    }
    value += ']';
    check(rf_config_override(config.get(), "devices", value.c_str()));
  }
  if (!flags.engine.empty()) {
    check(rf_config_override(config.get(), "engine",
                             json_quote(flags.engine).c_str()));
  }
  if (!flags.alpha_grid.empty()) {
    const std::string value =
        is_count(flags.alpha_grid)
            ? "{\"min\":0,\"max\":1,\"count\":" + flags.alpha_grid + "}"
            : "[" + flags.alpha_grid + "]";
    check(rf_config_override(config.get(), "alphas", value.c_str()));
  }
  if (flags.threads_given) {
    check(rf_config_override(config.get(), "threads",
                             std::to_string(flags.threads).c_str()));
  }
  if (!flags.out_path.empty()) {
    check(rf_config_override(config.get(), "output.path",
                             json_quote(flags.out_path).c_str()));
  }
  if (!flags.format.empty()) {
    check(rf_config_override(config.get(), "output.format",
                             json_quote(flags.format).c_str()));
  }
  for (const std::string& kv : flags.sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "rectiflow: error: --set expects key=JSON-value, got '"
                << kv << "'\n";
      return 1;
    }
    check(rf_config_override(config.get(), kv.substr(0, eq).c_str(),
                             kv.substr(eq + 1).c_str()));
  }

  rf_result* raw_result = nullptr;
  check(rf_run(config.get(), command.c_str(), &raw_result));
  ResultHandle result(raw_result);

  const char* warnings = rf_result_warnings(result.get());
  if (warnings != nullptr && warnings[0] != '\0') {
    std::cerr << warnings;
  }

  const char* format = rf_config_get(config.get(), "output.format");
  const std::string fmt = format != nullptr ? format : "csv";
  const char* payload = fmt == "json" ? rf_result_json(result.get())
                                      : rf_result_csv(result.get());
  const char* path_value = rf_config_get(config.get(), "output.path");
  const std::string path = path_value != nullptr ? path_value : "-";
  if (path == "-") {
    std::cout << payload;
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "rectiflow: error: cannot write output file '" << path
                << "'\n";
      return 1;
    }
    out << payload;
    if (!out.good()) {
      std::cerr << "rectiflow: error: failed writing output file '" << path
                << "'\n";
      return 1;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      std::string("rectiflow ") + rf_version() +
      " - steady-state quantum heat-rectifier simulator and optimizer"};
  app.require_subcommand(1);

  CommonFlags flags;
  const struct {
    const char* name;
    const char* description;
  } commands[] = {
      {"point", "Evaluate one operating point (currents, R, J, eta)"},
      {"tradeoff",
       "Optimal-operation locus: maximize eta over the box per (T_h, alpha)"},
      {"pareto", "Rectification-current Pareto fronts per device"},
      {"regions", "Two-device dominance map over (T_h, delta|g)"},
  };
  for (const auto& cmd : commands) {
    add_common_flags(app.add_subcommand(cmd.name, cmd.description), &flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems are configuration errors (exit 1); --help exits 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* active = app.get_subcommands().front();
  flags.threads_given = active->count("--threads") > 0;
  const std::string command = active->get_name();
  try {
    return run(command, flags);
  } catch (const std::exception& e) {
    std::cerr << "rectiflow: error: " << e.what() << "\n";
    return 3;
  }
}
