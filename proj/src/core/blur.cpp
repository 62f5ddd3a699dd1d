#include "ssnmg/blur.hpp"

#include <cmath>
#include <numbers>

#include "ssnmg/error.hpp"

namespace ssnmg {

BlurOperator::BlurOperator(double sigma, double w, int n, BlurBoundary mode)
    : sigma_(sigma), w_(w), n_(n), mode_(mode) {
  require(sigma > 0.0, "blur: sigma must be positive");
  require(w > 0.0 && w < 0.5, "blur: window half-width must lie in (0, 1/2)");
  require(n >= 1, "blur: n must be positive");
  const double h = 1.0 / n;
  // w/h - 1/2 can land on an integer up to rounding; do not let a last-bit
  // error push the window one cell wider.
  radius_ = static_cast<int>(std::ceil(w * n - 0.5 - 1e-12));
  if (radius_ < 1) fail(ErrorCode::invalid_argument, "blur: stencil radius is zero (h >= 2w)");
  w_h_ = (radius_ + 0.5) * h;

  weights_.resize(2 * radius_ + 1);
  double sum1d = 0.0;
  for (int m = -radius_; m <= radius_; ++m) {
    const double x = m * h;
    const double g = std::exp(-x * x / (2.0 * sigma * sigma));
    weights_[m + radius_] = g;
    sum1d += g;
  }
  for (auto& g : weights_) g /= sum1d;

  // Unnormalized interior row sum: h^2 (2 pi sigma^2 alpha)^-1 sum exp(..),
  // alpha = erf(w_h / (sigma sqrt 2))^2 being the window mass of the kernel.
  const double erf_w = std::erf(w_h_ / (sigma * std::numbers::sqrt2));
  const double raw_1d = h * sum1d / (sigma * std::sqrt(2.0 * std::numbers::pi) * erf_w);
  eta_ = 1.0 / (raw_1d * raw_1d) - 1.0;
}

bool BlurOperator::interior(int ix, int iy) const {
  return ix - radius_ >= 0 && ix + radius_ <= n_ - 1 && iy - radius_ >= 0 && iy + radius_ <= n_ - 1;
}

CellField BlurOperator::convolve(const CellField& u, PassOrder order) const {
  const int n = n_;
  const int r = radius_;
  const auto sn = static_cast<std::size_t>(n);
  const double* g = weights_.data() + r;

  auto pass_x = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (int iy = 0; iy < n; ++iy) {
      const double* row = in.data() + sn * iy;
      double* dst = out.data() + sn * iy;
      for (int m = -r; m <= r; ++m) {
        const int lo = std::max(0, -m);
        const int hi = std::min(n, n - m);
        const double gm = g[m];
        for (int ix = lo; ix < hi; ++ix) dst[ix] += gm * row[ix + m];
      }
    }
  };
  auto pass_y = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (int iy = 0; iy < n; ++iy) {
      double* dst = out.data() + sn * iy;
      const int lo = std::max(-r, -iy);
      const int hi = std::min(r, n - 1 - iy);
      for (int m = lo; m <= hi; ++m) {
        const double* src = in.data() + sn * (iy + m);
        const double gm = g[m];
        for (int ix = 0; ix < n; ++ix) dst[ix] += gm * src[ix];
      }
    }
  };

  std::vector<double> src(u.values().begin(), u.values().end());
  std::vector<double> tmp(src.size(), 0.0);
  std::vector<double> out(src.size(), 0.0);
  if (order == PassOrder::x_then_y) {
    pass_x(src, tmp);
    pass_y(tmp, out);
  } else {
    pass_y(src, tmp);
    pass_x(tmp, out);
  }
  return CellField(n, std::move(out));
}

CellField BlurOperator::apply(const CellField& u, PassOrder order) const {
  require(u.n() == n_, "blur: field is on a different level than the operator");
  CellField out = convolve(u, order);
  if (mode_ == BlurBoundary::restricted)
    for (int iy = 0; iy < n_; ++iy)
      for (int ix = 0; ix < n_; ++ix)
        if (!interior(ix, iy)) out.at(ix, iy) = 0.0;
  return out;
}

CellField BlurOperator::apply_adjoint(const CellField& u) const {
  require(u.n() == n_, "blur: field is on a different level than the operator");
  if (mode_ == BlurBoundary::zero_extension) return convolve(u, PassOrder::x_then_y);
  CellField masked = u;
  for (int iy = 0; iy < n_; ++iy)
    for (int ix = 0; ix < n_; ++ix)
      if (!interior(ix, iy)) masked.at(ix, iy) = 0.0;
  return convolve(masked, PassOrder::x_then_y);
}

BlurOperator build_blur(double sigma, double w, int n, BlurBoundary mode) { return BlurOperator(sigma, w, n, mode); }

BlurBackend::BlurBackend(double sigma, double w, BlurBoundary mode) : sigma_(sigma), w_(w), mode_(mode) {
  require(sigma > 0.0, "blur: sigma must be positive");
  require(w > 0.0 && w < 0.5, "blur: window half-width must lie in (0, 1/2)");
}

const BlurOperator& BlurBackend::at(int n) const {
  std::lock_guard lock(mutex_);
  auto& slot = ops_[n];
  if (!slot) slot = std::make_unique<BlurOperator>(sigma_, w_, n, mode_);
  return *slot;
}

CellField BlurBackend::apply_KtK(const CellField& u) const {
  const BlurOperator& op = at(u.n());
  return op.apply_adjoint(op.apply(u));
}

namespace {

double default_consistency_field(double x, double y) {
  return std::sin(std::numbers::pi * x) * std::cos(0.5 * std::numbers::pi * y) + 0.5 * x * y;
}

CellField sample(int n, double (*f)(double, double)) {
  CellField u(n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) u.at(ix, iy) = f((ix + 0.5) / n, (iy + 0.5) / n);
  return u;
}

CellField inject_to(const CellField& u, int target_n) {
  CellField v = u;
  while (v.n() < target_n) v = inject(v);
  require(v.n() == target_n, "consistency_rate: levels must be nested in the reference level");
  return v;
}

}  // namespace

ConsistencyStudy consistency_rate(double sigma, double w, const std::vector<int>& levels, int reference_n,
                                  double (*field)(double, double), double margin) {
  require(levels.size() >= 2, "consistency_rate needs at least two coarse levels plus the reference");
  if (!field) field = default_consistency_field;
  ConsistencyStudy study;
  study.reference_n = reference_n;
  const BlurOperator ref(sigma, w, reference_n, BlurBoundary::zero_extension);
  const double href = 1.0 / reference_n;
  for (int n : levels) {
    require(n < reference_n, "consistency_rate: every level must be coarser than the reference");
    const BlurOperator op(sigma, w, n, BlurBoundary::zero_extension);
    const CellField u = sample(n, field);
    const CellField exact = ref.apply(inject_to(u, reference_n));
    const CellField approx = inject_to(op.apply(u), reference_n);
    double s = 0.0;
    for (int iy = 0; iy < reference_n; ++iy)
      for (int ix = 0; ix < reference_n; ++ix) {
        const double x = (ix + 0.5) * href, y = (iy + 0.5) * href;
        if (x < margin || x > 1.0 - margin || y < margin || y > 1.0 - margin) continue;
        const double d = exact.at(ix, iy) - approx.at(ix, iy);
        s += d * d;
      }
    study.n.push_back(n);
    study.error.push_back(std::sqrt(s) * href);
  }
  const double e0 = study.error.front(), e1 = study.error.back();
  const double span = std::log2(static_cast<double>(study.n.back()) / study.n.front());
  study.observed_order = (e0 > 0.0 && e1 > 0.0 && span > 0.0) ? std::log2(e0 / e1) / span : 0.0;
  return study;
}

}  // namespace ssnmg
