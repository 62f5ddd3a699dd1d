#include "ssnmg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssnmg/error.hpp"

namespace ssnmg {

namespace {

void check_same_level(int a, int b, const char* what) {
  if (a != b)
    fail(ErrorCode::level_mismatch,
         std::string(what) + ": level mismatch (n=" + std::to_string(a) + " vs n=" + std::to_string(b) + ")");
}

}  // namespace

GridHierarchy::GridHierarchy(int n0, int levels) : n0_(n0), levels_(levels) {
  require(n0 >= 2, "grid hierarchy needs n0 >= 2");
  require(levels >= 1, "grid hierarchy needs at least one level");
  require(levels <= 24 && static_cast<long long>(n0) << (levels - 1) <= (1LL << 20),
          "grid hierarchy too large");
}

int GridHierarchy::n(int j) const {
  require(j >= 0 && j < levels_, "level index out of range: " + std::to_string(j));
  return n0_ << j;
}

int GridHierarchy::level_of(int n) const {
  for (int j = 0; j < levels_; ++j)
    if ((n0_ << j) == n) return j;
  return -1;
}

GridHierarchy build_hierarchy(int n0, int levels) { return GridHierarchy(n0, levels); }

CellField::CellField(int n, double value) : n_(n) {
  require(n >= 1, "cell field needs n >= 1");
  values_.assign(static_cast<std::size_t>(n) * n, value);
}

CellField::CellField(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  require(n >= 1, "cell field needs n >= 1");
  require(values_.size() == static_cast<std::size_t>(n) * n, "cell field length must be n^2");
}

bool CellField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

CellField& CellField::operator+=(const CellField& other) { return axpy(1.0, other); }
CellField& CellField::operator-=(const CellField& other) { return axpy(-1.0, other); }

CellField& CellField::operator*=(double s) {
  for (auto& x : values_) x *= s;
  return *this;
}

CellField& CellField::axpy(double a, const CellField& x) {
  check_same_level(n_, x.n_, "axpy");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
  return *this;
}

CellField operator+(CellField a, const CellField& b) { return a += b; }
CellField operator-(CellField a, const CellField& b) { return a -= b; }
CellField operator*(double s, CellField a) { return a *= s; }

InactiveMask::InactiveMask(int n, bool value) : n_(n) {
  require(n >= 1, "mask needs n >= 1");
  flags_.assign(static_cast<std::size_t>(n) * n, value ? 1 : 0);
}

InactiveMask::InactiveMask(int n, std::vector<std::uint8_t> flags) : n_(n), flags_(std::move(flags)) {
  require(n >= 1, "mask needs n >= 1");
  require(flags_.size() == static_cast<std::size_t>(n) * n, "mask length must be n^2");
  for (auto& f : flags_) f = f ? 1 : 0;
}

std::size_t InactiveMask::count() const {
  return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> InactiveMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < flags_.size(); ++i)
    if (flags_[i]) out.push_back(i);
  return out;
}

bool InactiveMask::subset_of(const InactiveMask& other) const {
  check_same_level(n_, other.n_, "subset_of");
  for (std::size_t i = 0; i < flags_.size(); ++i)
    if (flags_[i] && !other.flags_[i]) return false;
  return true;
}

double l2_inner(const CellField& u, const CellField& v) {
  check_same_level(u.n(), v.n(), "l2_inner");
  const auto a = u.values();
  const auto b = v.values();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * u.h() * u.h();
}

double l2_norm(const CellField& u) { return std::sqrt(l2_inner(u, u)); }

CellField restrict_avg(const CellField& u) {
  require(u.n() >= 2 && u.n() % 2 == 0, "restrict_avg needs a level with an even side count");
  const int nc = u.n() / 2;
  CellField out(nc);
  for (int iy = 0; iy < nc; ++iy)
    for (int ix = 0; ix < nc; ++ix)
      out.at(ix, iy) = 0.25 * (u.at(2 * ix, 2 * iy) + u.at(2 * ix + 1, 2 * iy) + u.at(2 * ix, 2 * iy + 1) +
                               u.at(2 * ix + 1, 2 * iy + 1));
  return out;
}

CellField inject(const CellField& u) {
  const int nf = 2 * u.n();
  CellField out(nf);
  for (int iy = 0; iy < nf; ++iy)
    for (int ix = 0; ix < nf; ++ix) out.at(ix, iy) = u.at(ix / 2, iy / 2);
  return out;
}

CellField mask_project(const CellField& u, const InactiveMask& m) {
  check_same_level(u.n(), m.n(), "mask_project");
  CellField out(u.n());
  for (std::size_t i = 0; i < u.size(); ++i)
    if (m[i]) out[i] = u[i];
  return out;
}

bool supported_on(const CellField& u, const InactiveMask& m) {
  check_same_level(u.n(), m.n(), "supported_on");
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!m[i] && u[i] != 0.0) return false;
  return true;
}

InactiveMask coarsen_inactive_set(const InactiveMask& m) {
  require(m.n() >= 2 && m.n() % 2 == 0, "coarsen_inactive_set needs a level with an even side count");
  const int nc = m.n() / 2;
  InactiveMask out(nc);
  for (int iy = 0; iy < nc; ++iy)
    for (int ix = 0; ix < nc; ++ix)
      out.set(ix, iy,
              m.at(2 * ix, 2 * iy) || m.at(2 * ix + 1, 2 * iy) || m.at(2 * ix, 2 * iy + 1) ||
                  m.at(2 * ix + 1, 2 * iy + 1));
  return out;
}

double domain_measure(const InactiveMask& m) { return static_cast<double>(m.count()) * m.h() * m.h(); }

double numerical_boundary_measure(const InactiveMask& fine, const InactiveMask& coarse) {
  if (coarse.n() * 2 != fine.n())
    fail(ErrorCode::level_mismatch, "numerical_boundary_measure: coarse level must have half the side count");
  std::size_t uncovered = 0;
  for (int iy = 0; iy < fine.n(); ++iy)
    for (int ix = 0; ix < fine.n(); ++ix) {
      const bool parent = coarse.at(ix / 2, iy / 2);
      const bool flagged = fine.at(ix, iy);
      if (flagged && !parent)
        fail(ErrorCode::invalid_argument, "numerical_boundary_measure: coarse mask does not cover the fine mask");
      if (parent && !flagged) ++uncovered;
    }
  return static_cast<double>(uncovered) * fine.h() * fine.h();
}

}  // namespace ssnmg
