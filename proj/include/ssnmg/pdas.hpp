#pragma once

// Primal-dual active set iteration for
//   min 1/2 |K u - y_d|^2 + beta/2 |u|^2,  a <= u <= b,
// with H = K*K + beta I and f = K* y_d. Multiplier convention: H u - f = lambda,
// lambda >= 0 where u = a and lambda <= 0 where u = b.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ssnmg/backend.hpp"
#include "ssnmg/grid.hpp"
#include "ssnmg/krylov.hpp"
#include "ssnmg/mgprec.hpp"
#include "ssnmg/partition.hpp"

namespace ssnmg {

class ProblemInstance {
 public:
  // Rejects beta <= 0, a_i >= b_i anywhere, non-finite data and level mismatch.
  ProblemInstance(std::shared_ptr<const OperatorBackend> backend, double beta, CellField a, CellField b, CellField f);

  int n() const { return f_.n(); }
  double beta() const { return beta_; }
  const CellField& a() const { return a_; }
  const CellField& b() const { return b_; }
  const CellField& f() const { return f_; }
  const std::shared_ptr<const OperatorBackend>& backend() const { return backend_; }

 private:
  std::shared_ptr<const OperatorBackend> backend_;
  double beta_;
  CellField a_, b_, f_;
};

// f = K*K u_d, i.e. y_d = K u_d.
ProblemInstance instance_from_target(std::shared_ptr<const OperatorBackend> backend, double beta, CellField a,
                                     CellField b, const CellField& u_d);

ActivePartition update_sets(const CellField& u, const CellField& lambda, const CellField& a, const CellField& b,
                            double beta);

enum class SolverKind { cg, mgcg };

struct SolverChoice {
  SolverKind kind = SolverKind::cg;
  // Base-level side count for mgcg; the preconditioner uses every level from
  // n_base up to the instance's n.
  int n_base = 0;
};

struct PdasOptions {
  int max_outer = 50;
  double lin_tol = 1e-8;
  int lin_max_iter = 5000;
  BaseSolveConfig base{};
  bool flexible = false;
};

struct OuterStep {
  std::size_t n_inactive = 0;
  std::size_t n_lower = 0;
  std::size_t n_upper = 0;
  bool solve_skipped = false;  // empty inactive set
  SolveReport linear;
};

struct SsnmState {
  CellField u;
  CellField lambda;
  ActivePartition partition;
  int outer_iterations = 0;
  std::vector<OuterStep> history;
};

enum class PdasStatus { converged, max_outer, linear_failure };
const char* to_string(PdasStatus s);

struct PdasResult {
  SsnmState state;
  PdasStatus status = PdasStatus::max_outer;
  std::string message;
  SolverKind solver_used = SolverKind::cg;
  std::map<int, std::size_t> hessian_applies;  // side count -> Hessian applications
  std::size_t base_solves = 0;

  bool ok() const { return status == PdasStatus::converged; }
  int total_linear_iterations() const;
  double average_linear_iterations() const;  // over outer steps that ran a solve
};

// Cold start when `init` is empty: u = clamp(0, a, b) if that lies strictly
// inside (a, b), else (a + b) / 2, and lambda = 0, so every cell starts
// inactive. Otherwise the first partition is update_sets(init.u, init.lambda).
// Stops when the partition repeats and the last linear solve converged.
PdasResult pdas_solve(const ProblemInstance& instance, const SolverChoice& solver, const PdasOptions& options = {},
                      const std::optional<SsnmState>& init = std::nullopt);

// max(|H u - f - lambda|, |lambda - max(0, K*K u - f + beta a) - min(0, K*K u - f + beta b)|)
double kkt_residual(const SsnmState& state, const ProblemInstance& instance);

// Instances in ascending n, each twice the previous. Level i starts from the
// injected (u, lambda) of level i-1. Levels with n <= n_base fall back to CG.
// Stops at the first failed level.
std::vector<PdasResult> nested_solve(const std::vector<ProblemInstance>& instances, const SolverChoice& solver,
                                     const PdasOptions& options = {});

}  // namespace ssnmg
