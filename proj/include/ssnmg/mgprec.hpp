#pragma once

// Multigrid preconditioner for the inactive Hessian on non-nested inactive
// spaces. Level k in [j0, j] carries the inactive mask obtained by repeated
// coarsening of the fine mask and its own restricted Hessian.
//
//   Z_j0 = (H^I_j0)^-1                       base solve (CG or dense)
//   Z_k  = N_k(T_k(Z_{k-1})),  j0 < k < j     N_k(X) = 2X - X H^I_k X
//   Z_j  = T_j(Z_{j-1})
//
// with the transfer T_k(X) v = pi_k (X pi_{k-1} v + beta^-1 (v - pi_{k-1} v)).

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "ssnmg/backend.hpp"
#include "ssnmg/dense.hpp"
#include "ssnmg/grid.hpp"
#include "ssnmg/hessian.hpp"
#include "ssnmg/krylov.hpp"

namespace ssnmg {

struct BaseSolveConfig {
  double rel_tol = 1e-10;
  int max_iter = 20000;
  // Factor the materialized base Hessian once instead of running CG.
  bool dense = false;
};

// mask_project(inject(X c) + scale (v - inject(c)), fine_mask) with
// c = mask_project(restrict_avg(v), coarse_mask). scale = 1/beta gives the
// transfer map, scale = beta with X = H^I_{k-1} gives S_k.
CellField transfer(const CellField& v, const InactiveMask& fine_mask, const InactiveMask& coarse_mask,
                   const LinearMap& coarse_action, double scale);

class MultigridPreconditioner {
 public:
  MultigridPreconditioner(const GridHierarchy& hierarchy, int j, int j0, const InactiveMask& fine_mask, double beta,
                          std::shared_ptr<const OperatorBackend> backend, BaseSolveConfig base = {});

  int fine_level() const { return j_; }
  int base_level() const { return j0_; }
  int n(int k) const { return hierarchy_.n(k); }
  double beta() const { return beta_; }
  const InactiveMask& mask(int k) const;

  // Z_j v on the finest level.
  CellField apply(const CellField& v) { return apply_Z(j_, v); }
  CellField apply_Z(int k, const CellField& v);
  CellField apply_transfer(int k, const LinearMap& coarse_action, const CellField& v);
  // S_k v = pi_k (H^I_{k-1} pi_{k-1} v + beta (v - pi_{k-1} v)), for j0 < k <= j.
  CellField apply_S(int k, const CellField& v);
  // H^I_k v (counted).
  CellField apply_hessian(int k, const CellField& v);

  std::size_t hessian_applies(int k) const;
  std::size_t base_solves() const { return base_solves_; }
  std::size_t base_cg_iterations() const { return base_cg_iterations_; }
  void reset_counters();

 private:
  HessianHandle& handle(int k);
  CellField base_solve(const CellField& v);
  void factor_base();

  GridHierarchy hierarchy_;
  int j_;
  int j0_;
  double beta_;
  BaseSolveConfig base_;
  std::vector<InactiveMask> masks_;     // index k - j0
  std::vector<HessianHandle> handles_;  // index k - j0
  std::optional<DenseMatrix> base_factor_;
  std::vector<std::size_t> base_basis_;
  std::size_t base_solves_ = 0;
  std::size_t base_cg_iterations_ = 0;
};

// Closed-form bound on f(j) / t(j) for l = j - j0 + 1 levels: the cost of one
// application of Z_j relative to one fine Hessian application, with t(k)
// proportional to N_k^p, N_{k-1} = alpha N_k, and a base solve of at most F_cg
// CG steps at c flops per unknown. Requires l >= 2 and 2 alpha^p < 1.
double predict_cost(int levels, double alpha, double p, double F_cg, double c_over_Cop);
double predict_cost_asymptote(double alpha, double p);

}  // namespace ssnmg
