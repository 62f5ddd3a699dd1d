#include "ssnmg/hessian.hpp"

#include "ssnmg/error.hpp"
#include "ssnmg/partition.hpp"

namespace ssnmg {

HessianHandle::HessianHandle(std::shared_ptr<const OperatorBackend> backend, double beta, int n,
                             std::optional<InactiveMask> mask)
    : backend_(std::move(backend)), beta_(beta), n_(n), mask_(std::move(mask)) {
  require(backend_ != nullptr, "hessian: backend is null");
  require(beta > 0.0, "hessian: beta must be positive");
  require(n >= 1, "hessian: n must be positive");
  if (mask_ && mask_->n() != n) fail(ErrorCode::level_mismatch, "hessian: mask is on a different level");
}

HessianHandle::HessianHandle(const HessianHandle& other)
    : backend_(other.backend_), beta_(other.beta_), n_(other.n_), mask_(other.mask_) {}

HessianHandle& HessianHandle::operator=(const HessianHandle& other) {
  if (this != &other) {
    backend_ = other.backend_;
    beta_ = other.beta_;
    n_ = other.n_;
    mask_ = other.mask_;
    applies_ = 0;
  }
  return *this;
}

CellField HessianHandle::apply(const CellField& u) {
  if (u.n() != n_) fail(ErrorCode::level_mismatch, "hessian: field is on a different level");
  CellField out = backend_->apply_KtK(u);
  out.axpy(beta_, u);
  ++applies_;
  return out;
}

CellField HessianHandle::apply_inactive(const CellField& v) {
  require(mask_.has_value(), "hessian: no inactive mask bound to this handle");
  if (!supported_on(v, *mask_)) fail(ErrorCode::invalid_argument, "hessian: input is not supported on the inactive mask");
  return mask_project(apply(v), *mask_);
}

CellField subsystem_rhs(HessianHandle& hessian, const CellField& f, const CellField& u_active,
                        const ActivePartition& partition) {
  if (f.n() != partition.n() || u_active.n() != partition.n())
    fail(ErrorCode::level_mismatch, "subsystem_rhs: fields and partition differ in level");
  const InactiveMask inactive = partition.inactive_mask();
  if (!supported_on(u_active, partition.active_mask()))
    fail(ErrorCode::invalid_argument, "subsystem_rhs: u_active has entries on the inactive set");
  if (partition.count(CellState::inactive) == partition.size()) return f;
  return mask_project(f - hessian.apply(u_active), inactive);
}

CellField recover_multiplier(HessianHandle& hessian, const CellField& u_full, const CellField& f,
                             const ActivePartition& partition) {
  if (f.n() != partition.n() || u_full.n() != partition.n())
    fail(ErrorCode::level_mismatch, "recover_multiplier: fields and partition differ in level");
  const InactiveMask active = partition.active_mask();
  if (active.empty()) return CellField(partition.n());
  return mask_project(hessian.apply(u_full) - f, active);
}

}  // namespace ssnmg
