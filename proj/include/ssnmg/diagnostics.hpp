#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ssnmg/backend.hpp"
#include "ssnmg/dense.hpp"
#include "ssnmg/grid.hpp"
#include "ssnmg/krylov.hpp"

namespace ssnmg {

inline constexpr std::size_t kDenseGuard = 4096;

// A linear map on the span of the flagged cells of `mask`, as a matrix in the
// basis of masked unit fields (ordered by cell index).
struct DenseOperator {
  DenseMatrix matrix;
  std::vector<std::size_t> basis;
  int n = 0;

  int dim() const { return matrix.m; }
};

DenseOperator materialize(const LinearMap& op, const InactiveMask& mask);
CellField apply_dense(const DenseOperator& op, const CellField& v);

// max |ln mu| over the eigenvalues mu of the pencil (A, B). Both must be
// symmetric (to 1e-6 relative) and positive definite.
double spectral_distance(const DenseMatrix& a, const DenseMatrix& b);
double spectral_distance(const DenseOperator& a, const DenseOperator& b);

struct RateRow {
  int n = 0;
  double h = 0.0;
  std::size_t dim = 0;
  double boundary_measure = 0.0;  // mu of the numerical boundary
  double distance = 0.0;          // d(M_j, (H^I_j)^-1)
};

// Per n: inactive mask from `mask_at(n)`, two-grid M_j with an exact coarse
// inverse, distance to the inverse inactive Hessian.
std::vector<RateRow> two_grid_rate_study(const std::function<InactiveMask(int)>& mask_at,
                                         std::shared_ptr<const OperatorBackend> backend, double beta,
                                         const std::vector<int>& n_list);

struct TestPoint {
  int key = 0;  // n for the weak test, level count for the strong test
  double avg_iterations = 0.0;
};

struct TestVerdict {
  bool pass = true;
  std::vector<std::pair<int, int>> violations;  // (key before, key after)
  std::string summary;
};

// Average iterations per outer step must not grow by more than `slack` from
// one point to the next (points sorted by key). Every offending step is listed.
TestVerdict weak_test(std::vector<TestPoint> points, double slack = 1.0);
// As weak_test over level counts, except that a rise from two to three levels
// is tolerated.
TestVerdict strong_test(std::vector<TestPoint> points, double slack = 1.0);

}  // namespace ssnmg
