#pragma once

// Windowed Gaussian blur on cell centres of a uniform grid.
//
// The continuous operator averages u against sigma^-2 exp(-|x|^2 / (2 sigma^2))
// over the sup-norm ball |x - y|_inf < w, normalized to unit mass. On a grid
// of width h the window is enlarged to the smallest union of cells containing
// it, w_h = (ceil(w/h - 1/2) + 1/2) h, the integral is replaced by the midpoint
// rule at the cell centres, and the weights are rescaled so that every row
// whose window lies inside the domain sums to one. The kernel separates, so
// the operator is applied as two 1D passes with the normalized 1D weights.

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ssnmg/backend.hpp"
#include "ssnmg/grid.hpp"

namespace ssnmg {

enum class BlurBoundary {
  zero_extension,  // samples outside the domain read as zero
  restricted,      // output zeroed where the window leaves the domain
};

enum class PassOrder { x_then_y, y_then_x };

class BlurOperator {
 public:
  BlurOperator(double sigma, double w, int n, BlurBoundary mode);

  int n() const { return n_; }
  double h() const { return 1.0 / n_; }
  double sigma() const { return sigma_; }
  double w() const { return w_; }
  double w_h() const { return w_h_; }
  int radius() const { return radius_; }
  BlurBoundary boundary() const { return mode_; }
  // Normalized 1D weights g_{-r..r}, summing to one.
  const std::vector<double>& weights() const { return weights_; }
  // (sum of unnormalized 2D interior row weights)^-1 - 1
  double eta() const { return eta_; }

  CellField apply(const CellField& u, PassOrder order = PassOrder::x_then_y) const;
  CellField apply_adjoint(const CellField& u) const;
  // Whether the window of cell (ix, iy) stays inside the domain.
  bool interior(int ix, int iy) const;

 private:
  CellField convolve(const CellField& u, PassOrder order) const;

  double sigma_;
  double w_;
  int n_;
  BlurBoundary mode_;
  int radius_;
  double w_h_;
  double eta_;
  std::vector<double> weights_;
};

// Rejects sigma <= 0, w outside (0, 1/2), and grids where the stencil radius
// would be zero (h >= 2w).
BlurOperator build_blur(double sigma, double w, int n, BlurBoundary mode = BlurBoundary::zero_extension);

// One BlurOperator per level, built on demand.
class BlurBackend final : public OperatorBackend {
 public:
  BlurBackend(double sigma, double w, BlurBoundary mode = BlurBoundary::zero_extension);

  std::string name() const override { return "deblur"; }
  double sigma() const { return sigma_; }
  double w() const { return w_; }
  BlurBoundary boundary() const { return mode_; }

  const BlurOperator& at(int n) const;
  CellField apply_K(const CellField& u) const { return at(u.n()).apply(u); }
  CellField apply_Kadj(const CellField& u) const { return at(u.n()).apply_adjoint(u); }
  CellField apply_KtK(const CellField& u) const override;

 private:
  double sigma_;
  double w_;
  BlurBoundary mode_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<BlurOperator>> ops_;
};

struct ConsistencyStudy {
  std::vector<int> n;          // coarse levels, ascending
  std::vector<double> error;   // L2 distance to the reference per level
  int reference_n = 0;
  double observed_order = 0.0;  // log2 fit over first and last level
};

// Fixed test field u(x, y), sampled at cell centres of each level, blurred on
// its own level and compared (after injection) with the blur of the injected
// field on the reference level. `margin` > 0 restricts the comparison to
// reference cells whose centres lie in [margin, 1 - margin]^2.
ConsistencyStudy consistency_rate(double sigma, double w, const std::vector<int>& levels, int reference_n,
                                  double (*field)(double, double) = nullptr, double margin = 0.0);

}  // namespace ssnmg
