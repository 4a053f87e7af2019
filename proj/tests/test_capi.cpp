// Exercises the shared-library surface exactly as an external consumer
// would: through the C header only, no internal headers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <string>

#include "doctest.h"
#include "rectiflow.h"

namespace {

struct ConfigGuard {
  rf_config* ptr = nullptr;
  ~ConfigGuard() { rf_config_free(ptr); }
};

struct ResultGuard {
  rf_result* ptr = nullptr;
  ~ResultGuard() { rf_result_free(ptr); }
};

constexpr const char* kPointConfig = R"({
  "devices": ["A"], "engine": "both", "t_hot": 2.0, "chi": 0.5,
  "alphas": [0.0, 1.0]
})";

}  // namespace

TEST_CASE("parse, override, run, and read back a point experiment") {
  ConfigGuard cfg;
  REQUIRE(rf_config_parse(kPointConfig, &cfg.ptr) == RF_OK);
  REQUIRE(cfg.ptr != nullptr);
  CHECK(std::string(rf_last_error()).empty());

  CHECK(rf_config_override(cfg.ptr, "chi", "0.25") == RF_OK);
  CHECK(std::string(rf_config_get(cfg.ptr, "chi")) == "0.25");

  ResultGuard res;
  REQUIRE(rf_run(cfg.ptr, "point", &res.ptr) == RF_OK);
  REQUIRE(res.ptr != nullptr);

  const std::string csv = rf_result_csv(res.ptr);
  CHECK(csv.rfind("# rectiflow ", 0) == 0);
  CHECK(csv.find("ratio_numeric_analytic") != std::string::npos);
  const std::string json = rf_result_json(res.ptr);
  CHECK(json.find("\"records\"") != std::string::npos);
  CHECK(rf_result_warnings(res.ptr) != nullptr);
}

TEST_CASE("malformed configuration reports the config status") {
  ConfigGuard cfg;
  CHECK(rf_config_parse("{ definitely not json", &cfg.ptr) == RF_ERR_CONFIG);
  CHECK(cfg.ptr == nullptr);
  CHECK(!std::string(rf_last_error()).empty());

  CHECK(rf_config_parse(R"({"devices": ["Z"]})", &cfg.ptr) == RF_ERR_CONFIG);
  CHECK(cfg.ptr == nullptr);
}

TEST_CASE("invalid override reports config status and keeps the handle "
          "usable") {
  ConfigGuard cfg;
  REQUIRE(rf_config_parse(kPointConfig, &cfg.ptr) == RF_OK);
  CHECK(rf_config_override(cfg.ptr, "engine", "\"magic\"") == RF_ERR_CONFIG);
  CHECK(!std::string(rf_last_error()).empty());
  // The handle still runs with its previous, valid state.
  ResultGuard res;
  CHECK(rf_run(cfg.ptr, "point", &res.ptr) == RF_OK);
}

TEST_CASE("physically invalid input reports the domain status") {
  ConfigGuard cfg;
  REQUIRE(rf_config_parse(R"({
    "devices": ["C"], "engine": "numeric", "t_hot": 2.0, "chi": 0.4,
    "g": 1.2, "alphas": [0.5]
  })",
                          &cfg.ptr) == RF_OK);
  ResultGuard res;
  CHECK(rf_run(cfg.ptr, "point", &res.ptr) == RF_ERR_DOMAIN);
  CHECK(res.ptr == nullptr);
  CHECK(std::string(rf_last_error()).find("g") != std::string::npos);
}

TEST_CASE("unknown command is a config error") {
  ConfigGuard cfg;
  REQUIRE(rf_config_parse(kPointConfig, &cfg.ptr) == RF_OK);
  ResultGuard res;
  CHECK(rf_run(cfg.ptr, "frobnicate", &res.ptr) == RF_ERR_CONFIG);
}

TEST_CASE("null arguments are rejected without crashing") {
  CHECK(rf_config_parse(nullptr, nullptr) == RF_ERR_CONFIG);
  CHECK(rf_config_override(nullptr, "engine", "1") == RF_ERR_CONFIG);
  CHECK(rf_run(nullptr, "point", nullptr) == RF_ERR_CONFIG);
  CHECK(rf_result_csv(nullptr) == nullptr);
  CHECK(rf_result_json(nullptr) == nullptr);
  CHECK(rf_result_warnings(nullptr) == nullptr);
  CHECK(rf_config_get(nullptr, "chi") == nullptr);
  rf_config_free(nullptr);
  rf_result_free(nullptr);
}

TEST_CASE("configuration read-back distinguishes set, defaulted, and "
          "absent keys") {
  ConfigGuard cfg;
  REQUIRE(rf_config_parse(kPointConfig, &cfg.ptr) == RF_OK);
  CHECK(std::string(rf_config_get(cfg.ptr, "engine")) == "both");
  // Effective defaults for the output sink are always readable.
  CHECK(std::string(rf_config_get(cfg.ptr, "output.path")) == "-");
  CHECK(std::string(rf_config_get(cfg.ptr, "output.format")) == "csv");
  // A key the document never set reads as absent.
  CHECK(rf_config_get(cfg.ptr, "delta") == nullptr);

  CHECK(rf_config_override(cfg.ptr, "output.format", "\"json\"") == RF_OK);
  CHECK(std::string(rf_config_get(cfg.ptr, "output.format")) == "json");
}

TEST_CASE("library metadata") {
  CHECK(std::strlen(rf_version()) > 0);
  CHECK(rf_default_threads() >= 1);
}
