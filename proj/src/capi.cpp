// C ABI wrapper over the experiment layer: opaque handles, status codes, and
// a thread-local last-error message. No exception may cross this boundary.
#include "rectiflow.h"

#include <algorithm>
#include <exception>
#include <string>
#include <utility>

#include "json.hpp"
#include "rectiflow/errors.hpp"
#include "rectiflow/experiment.hpp"

struct rf_config {
  rectiflow::ExperimentConfig cfg;
  std::string scratch;  // backs rf_config_get return values
};

struct rf_result {
  rectiflow::RunResult result;
};

namespace {

thread_local std::string g_last_error;

rf_status status_of(const rectiflow::Error& e) {
  switch (e.error_class()) {
    case rectiflow::ErrorClass::Config: return RF_ERR_CONFIG;
    case rectiflow::ErrorClass::Domain: return RF_ERR_DOMAIN;
    case rectiflow::ErrorClass::Numeric: return RF_ERR_NUMERIC;
  }
  return RF_ERR_NUMERIC;
}

template <typename Fn>
rf_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RF_OK;
  } catch (const rectiflow::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RF_ERR_NUMERIC;
  } catch (...) {
    g_last_error = "unknown failure";
    return RF_ERR_NUMERIC;
  }
}

rf_status null_argument(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return RF_ERR_CONFIG;
}

}  // namespace

extern "C" {

rf_status rf_config_parse(const char* json_text, rf_config** out) {
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  if (json_text == nullptr) return null_argument("json_text");
  return guarded([&] {
    auto cfg = rectiflow::ExperimentConfig::parse(json_text);
    *out = new rf_config{std::move(cfg)};
  });
}

rf_status rf_config_override(rf_config* config, const char* dotted_key,
                             const char* json_value) {
  if (config == nullptr) return null_argument("config");
  if (dotted_key == nullptr) return null_argument("dotted_key");
  if (json_value == nullptr) return null_argument("json_value");
  return guarded([&] { config->cfg.apply_override(dotted_key, json_value); });
}

rf_status rf_run(const rf_config* config, const char* command,
                 rf_result** out) {
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  if (config == nullptr) return null_argument("config");
  if (command == nullptr) return null_argument("command");
  return guarded([&] {
    auto result = rectiflow::run_command(config->cfg, command);
    *out = new rf_result{std::move(result)};
  });
}

const char* rf_result_csv(const rf_result* result) {
  return result != nullptr ? result->result.csv.c_str() : nullptr;
}

const char* rf_result_json(const rf_result* result) {
  return result != nullptr ? result->result.json.c_str() : nullptr;
}

const char* rf_result_warnings(const rf_result* result) {
  return result != nullptr ? result->result.warnings.c_str() : nullptr;
}

const char* rf_config_get(rf_config* config, const char* dotted_key) {
  if (config == nullptr || dotted_key == nullptr) return nullptr;
  const std::string key(dotted_key);
  if (key == "output.path") {
    config->scratch = config->cfg.output_path;
    return config->scratch.c_str();
  }
  if (key == "output.format") {
    config->scratch = config->cfg.output_format;
    return config->scratch.c_str();
  }
  try {
    const auto doc = nlohmann::json::parse(
        config->cfg.canonical_text.empty() ? "{}"
                                           : config->cfg.canonical_text);
    std::string pointer = "/" + key;
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    const nlohmann::json::json_pointer ptr(pointer);
    if (!doc.contains(ptr)) return nullptr;
    const auto& value = doc.at(ptr);
    config->scratch =
        value.is_string() ? value.get<std::string>() : value.dump();
    return config->scratch.c_str();
  } catch (...) {
    return nullptr;
  }
}

void rf_config_free(rf_config* config) { delete config; }

void rf_result_free(rf_result* result) { delete result; }

const char* rf_last_error(void) { return g_last_error.c_str(); }

const char* rf_version(void) { return rectiflow::version(); }

unsigned rf_default_threads(void) {
  try {
    return rectiflow::resolve_threads(0);
  } catch (...) {
    return 1;
  }
}

}  // extern "C"
