#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ssnmg/backend.hpp"
#include "ssnmg/blur.hpp"
#include "ssnmg/grid.hpp"
#include "ssnmg/pdas.hpp"

namespace ssnmg {

struct ExperimentConfig {
  std::string problem = "elliptic";  // elliptic | deblur
  std::vector<double> betas{1e-4};
  std::vector<int> ns{64};
  std::vector<std::string> solvers{"cg"};  // cg | mgcg
  // Base level of mgcg: n_base = n0 * 2^j0 unless n_base is set explicitly.
  std::vector<int> j0s{0};
  int n0 = 64;
  std::vector<int> n_bases;
  double a = 0.0;
  double b = 1.0;
  double w = 0.1;
  double sigma = 0.1 / 3.0;
  BlurBoundary boundary = BlurBoundary::zero_extension;
  std::string geometry = "two_disks";
  double lin_tol = 1e-8;
  double inner_tol = 1e-10;  // Poisson solves inside the elliptic operator
  double base_tol = 1e-10;
  int max_outer = 50;
  // Warm-start each n from the solution one level coarser, solving every
  // intermediate level between the smallest and largest requested n.
  bool nested = true;
  std::string out_dir = ".";
  std::string dump;  // "", pgm, csv or both ("pgm,csv")
  std::uint64_t seed = 1;

  std::vector<int> base_sizes() const;
};

// Applies one key=value setting; throws invalid_argument on unknown keys or
// malformed values. Lists are comma separated.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
// Flat key=value lines; '#' starts a comment, blank lines are skipped.
void load_config_file(ExperimentConfig& config, const std::filesystem::path& path);
void validate(const ExperimentConfig& config);

// Cellwise indicator of the target geometry, evaluated at cell centres.
// two_disks: disks at (0.30, 0.30) r 0.15 and (0.67, 0.58) r 0.20.
// two_rects: [0.15, 0.45] x [0.20, 0.70] and [0.55, 0.85] x [0.30, 0.60].
// checker:   1 on the lower-left and upper-right quadrants.
CellField make_target(const std::string& geometry, int n);
InactiveMask target_mask(const std::string& geometry, int n);

std::shared_ptr<const OperatorBackend> make_backend(const ExperimentConfig& config);
ProblemInstance make_instance(const ExperimentConfig& config, std::shared_ptr<const OperatorBackend> backend,
                              double beta, int n);

struct SweepRow {
  std::string problem;
  double beta = 0.0;
  int n = 0;
  std::string solver;
  int j0 = 0;  // -1 for cg
  int n_base = 0;
  int levels = 1;
  int ssnm_iters = 0;
  double avg_lin_iters = 0.0;
  int total_lin_iters = 0;
  std::map<int, std::size_t> hessian_applies;
  double wall_seconds = 0.0;
  std::string status;  // converged | skipped | max_outer | linear_failure | error: ...
  double kkt = 0.0;

  bool ok() const { return status == "converged" || status == "skipped"; }
};

std::vector<SweepRow> run_sweep(const ExperimentConfig& config);
std::string csv_header();
std::string to_csv(const SweepRow& row);
std::string to_csv(const std::vector<SweepRow>& rows);

enum class DumpFormat { pgm, csv };
void dump_field(const CellField& field, const std::filesystem::path& path, DumpFormat format);
CellField read_field_csv(const std::filesystem::path& path);

// Diagnostic studies as CSV text: twogrid-rate, spectral, wcycle-count.
std::string run_study(const ExperimentConfig& config, const std::string& study);

}  // namespace ssnmg
