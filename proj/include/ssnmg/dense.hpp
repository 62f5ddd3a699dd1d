#pragma once

// Small dense linear algebra for diagnostics and dense base solves.

#include <vector>

namespace ssnmg {

struct DenseMatrix {
  int m = 0;
  std::vector<double> a;  // row-major m x m

  DenseMatrix() = default;
  explicit DenseMatrix(int m_, double value = 0.0)
      : m(m_), a(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), value) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * m + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * m + j]; }

  static DenseMatrix identity(int m);
};

DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix operator+(const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix operator-(const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix operator*(double s, DenseMatrix x);
DenseMatrix transpose(const DenseMatrix& x);
std::vector<double> operator*(const DenseMatrix& x, const std::vector<double>& v);

double frobenius_norm(const DenseMatrix& x);
double max_abs(const DenseMatrix& x);
// ||X - X^T||_F / ||X||_F (0 for the zero matrix).
double asymmetry(const DenseMatrix& x);
DenseMatrix symmetrized(const DenseMatrix& x);

// Lower Cholesky factor; throws not_spd on a non-positive pivot.
DenseMatrix cholesky(const DenseMatrix& x);
std::vector<double> cholesky_solve(const DenseMatrix& lower, std::vector<double> rhs);
DenseMatrix spd_inverse(const DenseMatrix& x);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& x);

}  // namespace ssnmg
