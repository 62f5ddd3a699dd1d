#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "ssnmg/ssnmg.h"

TEST_CASE("status strings and version") {
  CHECK(std::string(ssnmg_status_string(SSNMG_OK)) == "ok");
  CHECK(std::string(ssnmg_status_string(SSNMG_NOT_SPD)).find("positive") != std::string::npos);
  CHECK(std::strlen(ssnmg_version()) > 0);
}

TEST_CASE("config errors surface as codes") {
  ssnmg_config* cfg = nullptr;
  REQUIRE(ssnmg_config_create(&cfg) == SSNMG_OK);
  CHECK(ssnmg_config_set(cfg, "beta", "abc") == SSNMG_INVALID_ARGUMENT);
  CHECK(std::string(ssnmg_last_error()).find("beta") != std::string::npos);
  CHECK(ssnmg_config_set(cfg, "unknown", "1") == SSNMG_INVALID_ARGUMENT);
  CHECK(ssnmg_config_set(nullptr, "beta", "1") == SSNMG_INVALID_ARGUMENT);
  CHECK(ssnmg_config_load_file(cfg, "/nonexistent/file.cfg") == SSNMG_IO);
  CHECK(ssnmg_config_set(cfg, "n", "") == SSNMG_OK);
  CHECK(ssnmg_config_validate(cfg) == SSNMG_INVALID_ARGUMENT);
  ssnmg_result* res = nullptr;
  CHECK(ssnmg_run_sweep(cfg, &res) == SSNMG_INVALID_ARGUMENT);
  CHECK(res == nullptr);
  CHECK(ssnmg_run_study(cfg, "nonsense", &res) == SSNMG_INVALID_ARGUMENT);
  ssnmg_config_destroy(cfg);
  CHECK(ssnmg_config_create(nullptr) == SSNMG_INVALID_ARGUMENT);
}

TEST_CASE("sweep through the C interface") {
  ssnmg_config* cfg = nullptr;
  REQUIRE(ssnmg_config_create(&cfg) == SSNMG_OK);
  REQUIRE(ssnmg_config_set(cfg, "problem", "deblur") == SSNMG_OK);
  REQUIRE(ssnmg_config_set(cfg, "beta", "0.04") == SSNMG_OK);
  REQUIRE(ssnmg_config_set(cfg, "n", "16,32") == SSNMG_OK);
  REQUIRE(ssnmg_config_set(cfg, "solver", "cg,mgcg") == SSNMG_OK);
  REQUIRE(ssnmg_config_set(cfg, "n_base", "16") == SSNMG_OK);
  REQUIRE(ssnmg_config_validate(cfg) == SSNMG_OK);
  ssnmg_result* res = nullptr;
  REQUIRE(ssnmg_run_sweep(cfg, &res) == SSNMG_OK);
  CHECK(ssnmg_result_rows(res) == 4);
  CHECK(ssnmg_result_failed(res) == 0);
  const std::string csv = ssnmg_result_csv(res);
  CHECK(csv.find("deblur,0.04,32,mgcg") != std::string::npos);
  const auto path = std::filesystem::temp_directory_path() / "ssnmg_capi_results.csv";
  CHECK(ssnmg_result_write(res, path.string().c_str()) == SSNMG_OK);
  CHECK(std::filesystem::file_size(path) == csv.size());
  CHECK(ssnmg_result_write(res, "/nonexistent/dir/x.csv") == SSNMG_IO);
  ssnmg_result_destroy(res);

  REQUIRE(ssnmg_run_study(cfg, "spectral", &res) == SSNMG_OK);
  CHECK(std::string(ssnmg_result_csv(res)).find("d(2I,I)") != std::string::npos);
  ssnmg_result_destroy(res);
  ssnmg_config_destroy(cfg);
}
