#include "ssnmg/ssnmg.h"

#include <fstream>
#include <new>
#include <string>

#include "ssnmg/error.hpp"
#include "ssnmg/harness.hpp"

struct ssnmg_config {
  ssnmg::ExperimentConfig cfg;
};

struct ssnmg_result {
  std::string csv;
  int rows = 0;
  int failed = 0;
};

namespace {

thread_local std::string last_error;

ssnmg_status to_status(ssnmg::ErrorCode c) {
  switch (c) {
    case ssnmg::ErrorCode::invalid_argument: return SSNMG_INVALID_ARGUMENT;
    case ssnmg::ErrorCode::level_mismatch: return SSNMG_LEVEL_MISMATCH;
    case ssnmg::ErrorCode::not_converged: return SSNMG_NOT_CONVERGED;
    case ssnmg::ErrorCode::not_spd: return SSNMG_NOT_SPD;
    case ssnmg::ErrorCode::dimension_guard: return SSNMG_DIMENSION_GUARD;
    case ssnmg::ErrorCode::io: return SSNMG_IO;
  }
  return SSNMG_INTERNAL;
}

template <class F>
ssnmg_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return SSNMG_OK;
  } catch (const ssnmg::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return SSNMG_INTERNAL;
}

ssnmg_status null_arg(const char* what) {
  last_error = std::string("null argument: ") + what;
  return SSNMG_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* ssnmg_version(void) { return "1.0.0"; }

const char* ssnmg_status_string(ssnmg_status s) {
  switch (s) {
    case SSNMG_OK: return "ok";
    case SSNMG_INVALID_ARGUMENT: return "invalid argument";
    case SSNMG_LEVEL_MISMATCH: return "level mismatch";
    case SSNMG_NOT_CONVERGED: return "not converged";
    case SSNMG_NOT_SPD: return "not symmetric positive definite";
    case SSNMG_DIMENSION_GUARD: return "dimension guard exceeded";
    case SSNMG_IO: return "i/o error";
    case SSNMG_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ssnmg_last_error(void) { return last_error.c_str(); }

ssnmg_status ssnmg_config_create(ssnmg_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new ssnmg_config(); });
}

void ssnmg_config_destroy(ssnmg_config* config) { delete config; }

ssnmg_status ssnmg_config_set(ssnmg_config* config, const char* key, const char* value) {
  if (!config) return null_arg("config");
  if (!key || !value) return null_arg("key/value");
  return guarded([&] { ssnmg::apply_setting(config->cfg, key, value); });
}

ssnmg_status ssnmg_config_load_file(ssnmg_config* config, const char* path) {
  if (!config) return null_arg("config");
  if (!path) return null_arg("path");
  return guarded([&] { ssnmg::load_config_file(config->cfg, path); });
}

ssnmg_status ssnmg_config_validate(const ssnmg_config* config) {
  if (!config) return null_arg("config");
  return guarded([&] { ssnmg::validate(config->cfg); });
}

ssnmg_status ssnmg_run_sweep(const ssnmg_config* config, ssnmg_result** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const auto rows = ssnmg::run_sweep(config->cfg);
    auto* r = new ssnmg_result();
    r->csv = ssnmg::to_csv(rows);
    r->rows = static_cast<int>(rows.size());
    for (const auto& row : rows)
      if (!row.ok()) ++r->failed;
    *out = r;
  });
}

ssnmg_status ssnmg_run_study(const ssnmg_config* config, const char* study, ssnmg_result** out) {
  if (!config) return null_arg("config");
  if (!study) return null_arg("study");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto* r = new ssnmg_result();
    r->csv = ssnmg::run_study(config->cfg, study);
    for (char ch : r->csv)
      if (ch == '\n') ++r->rows;
    if (r->rows > 0) --r->rows;
    *out = r;
  });
}

const char* ssnmg_result_csv(const ssnmg_result* result) { return result ? result->csv.c_str() : ""; }
int ssnmg_result_rows(const ssnmg_result* result) { return result ? result->rows : 0; }
int ssnmg_result_failed(const ssnmg_result* result) { return result ? result->failed : 0; }

ssnmg_status ssnmg_result_write(const ssnmg_result* result, const char* path) {
  if (!result) return null_arg("result");
  if (!path) return null_arg("path");
  return guarded([&] {
    std::ofstream f(path);
    if (!f) ssnmg::fail(ssnmg::ErrorCode::io, std::string("cannot open ") + path);
    f << result->csv;
    if (!f) ssnmg::fail(ssnmg::ErrorCode::io, std::string("write failed for ") + path);
  });
}

void ssnmg_result_destroy(ssnmg_result* result) { delete result; }

}  // extern "C"
