#pragma once

#include <string>

#include "ssnmg/grid.hpp"

namespace ssnmg {

// A family of discrete forward operators K_n, one per grid level. The solver
// only needs the normal-equations product K*K, taken with respect to the L2
// inner products of the control and state spaces. The level is read off the
// argument's side count.
class OperatorBackend {
 public:
  virtual ~OperatorBackend() = default;
  virtual std::string name() const = 0;
  virtual CellField apply_KtK(const CellField& u) const = 0;
};

// K = 0. Test stub: the Hessian degenerates to beta * I.
class ZeroBackend final : public OperatorBackend {
 public:
  std::string name() const override { return "zero"; }
  CellField apply_KtK(const CellField& u) const override { return CellField(u.n()); }
};

}  // namespace ssnmg
