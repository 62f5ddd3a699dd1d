#pragma once

// Solution operator of -Laplace(y) = u on the unit square with homogeneous
// Dirichlet data, discretized with continuous bilinear (Q1) elements on the
// same uniform grid that carries the piecewise-constant control.
//
// With B the load matrix (B_{node,cell} = integral of the nodal basis function
// over the cell), A the Q1 stiffness matrix and Mt the Q1 mass matrix,
//
//   K u     = A^{-1} B u
//   K* y    = h^{-2} B^T A^{-1} Mt y
//   K*K u   = h^{-2} B^T A^{-1} Mt A^{-1} B u
//
// where h^2 I is the (diagonal) mass matrix of the control space.

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ssnmg/backend.hpp"
#include "ssnmg/grid.hpp"

namespace ssnmg {

// Values at the (n-1)^2 interior nodes of an n x n cell grid, node (i, j),
// 1 <= i, j <= n-1, stored at (i-1) + (n-1)(j-1). Boundary values are zero.
class NodalField {
 public:
  NodalField() = default;
  explicit NodalField(int n, double value = 0.0);

  int n() const { return n_; }
  int side() const { return n_ - 1; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  // Interior node (i, j), 1-based as above.
  double& at(int i, int j) { return values_[static_cast<std::size_t>(i - 1) + static_cast<std::size_t>(n_ - 1) * (j - 1)]; }
  double at(int i, int j) const { return values_[static_cast<std::size_t>(i - 1) + static_cast<std::size_t>(n_ - 1) * (j - 1)]; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  double norm2() const;
  double max_abs() const;

 private:
  int n_ = 0;
  std::vector<double> values_;
};

struct EllipticConfig {
  double tol = 1e-10;  // relative residual of each Poisson solve
  int max_cycles = 60;
  int pre_sweeps = 2;
  int post_sweeps = 2;
  int n_direct = 64;  // banded Cholesky at or below this side count
};

// B u: each cell contributes h^2/4 * u to each of its interior corner nodes.
NodalField apply_load(const CellField& u);
// B^T y
CellField apply_load_transpose(const NodalField& y);
// Q1 stiffness, stencil (1/3) [-1 -1 -1; -1 8 -1; -1 -1 -1].
NodalField apply_stiffness(const NodalField& y);
// Q1 mass, stencil (h^2/36) [1 4 1; 4 16 4; 1 4 1].
NodalField apply_nodal_mass(const NodalField& y);

struct PoissonStats {
  int cycles = 0;  // 0 for a direct solve
  double rel_residual = 0.0;
};

// Solves A y = rhs on one grid. Banded Cholesky for n <= n_direct, otherwise
// V(pre, post) cycles with red-black Gauss-Seidel, full-weighting restriction
// and bilinear prolongation, bottoming out in the banded factorization.
class PoissonSolver {
 public:
  PoissonSolver(int n, EllipticConfig config);
  ~PoissonSolver();
  PoissonSolver(const PoissonSolver&) = delete;
  PoissonSolver& operator=(const PoissonSolver&) = delete;

  int n() const { return n_; }
  NodalField solve(const NodalField& rhs, PoissonStats* stats = nullptr) const;

 private:
  struct Impl;
  int n_;
  EllipticConfig config_;
  std::unique_ptr<Impl> impl_;
};

NodalField poisson_solve(const NodalField& rhs, const EllipticConfig& config = {}, PoissonStats* stats = nullptr);

class EllipticBackend final : public OperatorBackend {
 public:
  explicit EllipticBackend(EllipticConfig config = {});

  std::string name() const override { return "elliptic"; }
  const EllipticConfig& config() const { return config_; }

  NodalField apply_K(const CellField& u) const;
  CellField apply_Kadj(const NodalField& y) const;
  CellField apply_KtK(const CellField& u) const override;

  const PoissonSolver& solver(int n) const;

 private:
  EllipticConfig config_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<PoissonSolver>> solvers_;
};

}  // namespace ssnmg
