#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ssnmg/grid.hpp"

namespace ssnmg {

using LinearMap = std::function<CellField(const CellField&)>;

struct KrylovConfig {
  double rel_tol = 1e-8;
  int max_iter = 1000;
  bool record_residuals = false;
  // Polak-Ribiere beta, tolerates a mildly nonlinear (inexact) preconditioner.
  bool flexible = false;
};

enum class KrylovStatus { converged, max_iterations, spd_violation, prec_not_positive };

struct SolveReport {
  int iterations = 0;
  double rel_residual = 0.0;
  std::vector<double> history;  // ||r_k|| / ||r_0||, k = 0..iterations, when recorded
  bool converged = false;
  KrylovStatus status = KrylovStatus::max_iterations;
};

struct KrylovResult {
  CellField x;
  SolveReport report;
};

const char* to_string(KrylovStatus s);

// Both start from x = 0 and stop on ||r_k|| <= rel_tol ||r_0|| in the l2_inner
// norm. Failures are reported, not thrown.
KrylovResult cg(const LinearMap& op, const CellField& rhs, const KrylovConfig& config = {});
KrylovResult pcg(const LinearMap& op, const LinearMap& prec, const CellField& rhs, const KrylovConfig& config = {});

}  // namespace ssnmg
