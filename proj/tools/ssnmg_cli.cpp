// Command-line front end. Every option maps onto a config key, so
// `--config file` and flags can be mixed; flags win.

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssnmg/ssnmg.h"

namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

const std::vector<Flag> kSolveFlags = {
    {"--problem", "problem", "elliptic | deblur"},
    {"--beta", "beta", "regularization weights, comma separated"},
    {"--n", "n", "cells per side, comma separated"},
    {"--solver", "solver", "cg | mgcg (comma separated for both)"},
    {"--j0", "j0", "base level(s) of mgcg, n_base = n0 * 2^j0"},
    {"--n0", "n0", "side count of level 0 (default 64)"},
    {"--n-base", "n_base", "base side count(s) of mgcg, overrides --j0"},
    {"--w", "w", "blur window half-width"},
    {"--sigma", "sigma", "blur kernel width"},
    {"--boundary-mode", "boundary_mode", "zero_extension | restricted"},
    {"--bounds", "bounds", "a,b"},
    {"--geometry", "geometry", "two_disks | two_rects | checker"},
    {"--tol", "tol", "relative tolerance of the linear solves"},
    {"--inner-tol", "inner_tol", "tolerance of the Poisson solves"},
    {"--base-tol", "base_tol", "tolerance of the base-level CG"},
    {"--max-outer", "max_outer", "cap on active-set iterations"},
    {"--nested", "nested", "warm start from coarser levels (true/false)"},
    {"--dump", "dump", "write u_min_<n> as pgm and/or csv"},
    {"--seed", "seed", "seed for randomized diagnostics"},
};

int report(ssnmg_status s, const char* what) {
  std::fprintf(stderr, "ssnmg: %s: %s (%s)\n", what, ssnmg_status_string(s), ssnmg_last_error());
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semismooth Newton solver with multigrid-preconditioned subsystem solves"};
  app.require_subcommand(1);

  std::string config_file;
  std::string out_dir = ".";
  std::string study;
  std::map<std::string, std::string> values;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "key=value configuration file");
    sub->add_option("--out", out_dir, "output directory");
    for (const auto& f : kSolveFlags) sub->add_option(f.name, values[f.key], f.help);
  };
  CLI::App* solve = app.add_subcommand("solve", "run a sweep and write results.csv");
  add_common(solve);
  CLI::App* diagnose = app.add_subcommand("diagnose", "run a diagnostic study and write <study>.csv");
  add_common(diagnose);
  diagnose->add_option("--study", study, "twogrid-rate | spectral | wcycle-count")
      ->required()
      ->check(CLI::IsMember({"twogrid-rate", "spectral", "wcycle-count"}));

  CLI11_PARSE(app, argc, argv);

  ssnmg_config* cfg = nullptr;
  if (auto s = ssnmg_config_create(&cfg); s != SSNMG_OK) return report(s, "config");
  auto cleanup = [&] { ssnmg_config_destroy(cfg); };

  if (!config_file.empty())
    if (auto s = ssnmg_config_load_file(cfg, config_file.c_str()); s != SSNMG_OK) {
      cleanup();
      return report(s, "config file");
    }
  for (const auto& f : kSolveFlags) {
    const std::string& v = values[f.key];
    if (v.empty()) continue;
    if (auto s = ssnmg_config_set(cfg, f.key, v.c_str()); s != SSNMG_OK) {
      cleanup();
      return report(s, f.name);
    }
  }
  ssnmg_config_set(cfg, "out_dir", out_dir.c_str());

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  ssnmg_result* res = nullptr;
  ssnmg_status s = solve->parsed() ? ssnmg_run_sweep(cfg, &res) : ssnmg_run_study(cfg, study.c_str(), &res);
  cleanup();
  if (s != SSNMG_OK) return report(s, solve->parsed() ? "solve" : "diagnose");

  const std::string file = solve->parsed() ? "results.csv" : study + ".csv";
  const std::string path = (std::filesystem::path(out_dir) / file).string();
  std::fputs(ssnmg_result_csv(res), stdout);
  s = ssnmg_result_write(res, path.c_str());
  const int failed = ssnmg_result_failed(res);
  ssnmg_result_destroy(res);
  if (s != SSNMG_OK) return report(s, "write");
  if (failed > 0) {
    std::fprintf(stderr, "ssnmg: %d sweep point(s) failed\n", failed);
    return 1;
  }
  return 0;
}
