#pragma once

#include <cstddef>
#include <memory>
#include <optional>

#include "ssnmg/backend.hpp"
#include "ssnmg/grid.hpp"

namespace ssnmg {

class ActivePartition;

// H = K*K + beta I on one level, optionally restricted to an inactive mask
// (H^I = pi^I H E^I). Counts its applications; a copy starts from zero.
// Not thread-safe: confine a handle to the solve that owns it.
class HessianHandle {
 public:
  HessianHandle(std::shared_ptr<const OperatorBackend> backend, double beta, int n,
                std::optional<InactiveMask> mask = std::nullopt);
  HessianHandle(const HessianHandle& other);
  HessianHandle& operator=(const HessianHandle& other);
  HessianHandle(HessianHandle&&) noexcept = default;
  HessianHandle& operator=(HessianHandle&&) noexcept = default;

  double beta() const { return beta_; }
  int n() const { return n_; }
  const OperatorBackend& backend() const { return *backend_; }
  const std::shared_ptr<const OperatorBackend>& backend_ptr() const { return backend_; }
  const std::optional<InactiveMask>& mask() const { return mask_; }

  // K*K u + beta u
  CellField apply(const CellField& u);
  // mask_project(apply(v), m); v must already vanish outside the mask.
  CellField apply_inactive(const CellField& v);

  std::size_t applies() const { return applies_; }
  void reset_counter() { applies_ = 0; }

 private:
  std::shared_ptr<const OperatorBackend> backend_;
  double beta_;
  int n_;
  std::optional<InactiveMask> mask_;
  std::size_t applies_ = 0;
};

// Right-hand side of the inactive subsystem: mask_project(f - H u_active, I).
CellField subsystem_rhs(HessianHandle& hessian, const CellField& f, const CellField& u_active,
                        const ActivePartition& partition);

// Multiplier on the active cells, lambda_A = (H u - f)_A, zero on I.
CellField recover_multiplier(HessianHandle& hessian, const CellField& u_full, const CellField& f,
                             const ActivePartition& partition);

}  // namespace ssnmg
