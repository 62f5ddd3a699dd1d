#include "ssnmg/mgprec.hpp"

#include <cmath>
#include <string>

#include "ssnmg/error.hpp"

namespace ssnmg {

CellField transfer(const CellField& v, const InactiveMask& fine_mask, const InactiveMask& coarse_mask,
                   const LinearMap& coarse_action, double scale) {
  if (v.n() != fine_mask.n() || coarse_mask.n() * 2 != fine_mask.n())
    fail(ErrorCode::level_mismatch, "transfer: field and masks are not on consecutive levels");
  const CellField c = mask_project(restrict_avg(v), coarse_mask);
  CellField out = v;
  out.axpy(-1.0, inject(c));
  out *= scale;
  out += inject(coarse_action(c));
  return mask_project(out, fine_mask);
}

MultigridPreconditioner::MultigridPreconditioner(const GridHierarchy& hierarchy, int j, int j0,
                                                 const InactiveMask& fine_mask, double beta,
                                                 std::shared_ptr<const OperatorBackend> backend, BaseSolveConfig base)
    : hierarchy_(hierarchy), j_(j), j0_(j0), beta_(beta), base_(base) {
  require(j < hierarchy.levels() && j0 >= 0, "mgprec: level out of range");
  require(j0 < j, "mgprec: base level must be coarser than the fine level");
  require(beta > 0.0, "mgprec: beta must be positive");
  require(base.rel_tol > 0.0 && base.rel_tol < 1.0 && base.max_iter >= 1, "mgprec: invalid base solve config");
  if (fine_mask.n() != hierarchy.n(j)) fail(ErrorCode::level_mismatch, "mgprec: fine mask is not on level j");
  require(!fine_mask.empty(), "mgprec: empty inactive set, nothing to precondition");

  masks_.resize(static_cast<std::size_t>(j - j0 + 1));
  masks_.back() = fine_mask;
  for (int k = j - 1; k >= j0; --k) masks_[k - j0] = coarsen_inactive_set(masks_[k + 1 - j0]);
  for (int k = j0; k <= j; ++k) handles_.emplace_back(backend, beta, hierarchy.n(k), masks_[k - j0]);
  if (base.dense) factor_base();
}

void MultigridPreconditioner::factor_base() {
  HessianHandle& h = handles_.front();
  const InactiveMask& m = masks_.front();
  base_basis_ = m.indices();
  const int dim = static_cast<int>(base_basis_.size());
  if (dim > 4096) fail(ErrorCode::dimension_guard, "mgprec: dense base level exceeds 4096 unknowns");
  DenseMatrix a(dim);
  for (int c = 0; c < dim; ++c) {
    CellField e(m.n());
    e[base_basis_[c]] = 1.0;
    const CellField col = h.apply_inactive(e);
    for (int r = 0; r < dim; ++r) a(r, c) = col[base_basis_[r]];
  }
  h.reset_counter();
  base_factor_ = cholesky(symmetrized(a));
}

const InactiveMask& MultigridPreconditioner::mask(int k) const {
  require(k >= j0_ && k <= j_, "mgprec: level out of range");
  return masks_[k - j0_];
}

HessianHandle& MultigridPreconditioner::handle(int k) {
  require(k >= j0_ && k <= j_, "mgprec: level out of range");
  return handles_[k - j0_];
}

CellField MultigridPreconditioner::apply_hessian(int k, const CellField& v) { return handle(k).apply_inactive(v); }

std::size_t MultigridPreconditioner::hessian_applies(int k) const {
  require(k >= j0_ && k <= j_, "mgprec: level out of range");
  return handles_[k - j0_].applies();
}

void MultigridPreconditioner::reset_counters() {
  for (auto& h : handles_) h.reset_counter();
  base_solves_ = 0;
  base_cg_iterations_ = 0;
}

CellField MultigridPreconditioner::base_solve(const CellField& v) {
  ++base_solves_;
  HessianHandle& h = handles_.front();
  const InactiveMask& m = masks_.front();
  if (base_factor_) {
    std::vector<double> rhs(base_basis_.size());
    for (std::size_t r = 0; r < rhs.size(); ++r) rhs[r] = v[base_basis_[r]];
    const auto x = cholesky_solve(*base_factor_, std::move(rhs));
    CellField out(m.n());
    for (std::size_t r = 0; r < x.size(); ++r) out[base_basis_[r]] = x[r];
    return out;
  }
  KrylovConfig cfg;
  cfg.rel_tol = base_.rel_tol;
  cfg.max_iter = base_.max_iter;
  KrylovResult res = cg([&](const CellField& x) { return h.apply_inactive(x); }, v, cfg);
  base_cg_iterations_ += static_cast<std::size_t>(res.report.iterations);
  if (!res.report.converged)
    fail(ErrorCode::not_converged, "mgprec: base-level CG at n=" + std::to_string(m.n()) + " stopped with " +
                                       to_string(res.report.status) + ", relative residual " +
                                       std::to_string(res.report.rel_residual));
  return std::move(res.x);
}

CellField MultigridPreconditioner::apply_transfer(int k, const LinearMap& coarse_action, const CellField& v) {
  require(k > j0_ && k <= j_, "mgprec: transfer level out of range");
  if (!supported_on(v, mask(k))) fail(ErrorCode::invalid_argument, "mgprec: input is not supported on the mask");
  return transfer(v, mask(k), mask(k - 1), coarse_action, 1.0 / beta_);
}

CellField MultigridPreconditioner::apply_S(int k, const CellField& v) {
  require(k > j0_ && k <= j_, "mgprec: level out of range");
  if (!supported_on(v, mask(k))) fail(ErrorCode::invalid_argument, "mgprec: input is not supported on the mask");
  return transfer(v, mask(k), mask(k - 1), [&](const CellField& c) { return apply_hessian(k - 1, c); }, beta_);
}

CellField MultigridPreconditioner::apply_Z(int k, const CellField& v) {
  require(k >= j0_ && k <= j_, "mgprec: level out of range");
  if (v.n() != hierarchy_.n(k)) fail(ErrorCode::level_mismatch, "mgprec: field is not on level k");
  if (!supported_on(v, mask(k))) fail(ErrorCode::invalid_argument, "mgprec: input is not supported on the mask");
  if (k == j0_) return base_solve(v);
  const LinearMap coarse = [this, k](const CellField& c) { return apply_Z(k - 1, c); };
  const CellField a = apply_transfer(k, coarse, v);
  if (k == j_) return a;
  CellField out = apply_transfer(k, coarse, apply_hessian(k, a));
  out *= -1.0;
  out.axpy(2.0, a);
  return out;
}

double predict_cost(int levels, double alpha, double p, double F_cg, double c_over_Cop) {
  require(levels >= 2, "predict_cost: need at least two levels");
  require(alpha > 0.0 && p > 0.0 && F_cg > 0.0 && c_over_Cop > 0.0, "predict_cost: parameters must be positive");
  const double q = 2.0 * std::pow(alpha, p);
  require(q < 1.0, "predict_cost: 2 alpha^p must be below 1");
  const double base = std::pow(2.0 * alpha, levels - 1) * F_cg * c_over_Cop / 2.0;
  return base + std::pow(alpha, p) / (1.0 - q) * (1.0 - std::pow(q, levels - 2));
}

double predict_cost_asymptote(double alpha, double p) {
  require(alpha > 0.0 && p > 0.0, "predict_cost: parameters must be positive");
  const double q = 2.0 * std::pow(alpha, p);
  require(q < 1.0, "predict_cost: 2 alpha^p must be below 1");
  return std::pow(alpha, p) / (1.0 - q);
}

}  // namespace ssnmg
