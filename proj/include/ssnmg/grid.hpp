#pragma once

// Uniform nested square grids on the unit square, piecewise-constant cell
// fields, inactive-cell masks and the transfers between levels.
//
// Cell (ix, iy) of an n x n grid is stored at index ix + n * iy. Cell
// (ix, iy) at level j has the four children (2ix+dx, 2iy+dy), dx, dy in {0,1},
// at level j+1.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ssnmg {

class GridHierarchy {
 public:
  GridHierarchy(int n0, int levels);

  int levels() const { return levels_; }
  int n0() const { return n0_; }
  int n(int j) const;
  double h(int j) const { return 1.0 / n(j); }
  std::size_t cells(int j) const {
    const auto side = static_cast<std::size_t>(n(j));
    return side * side;
  }
  // Level index of a side count, or -1 when the hierarchy has no such level.
  int level_of(int n) const;

 private:
  int n0_;
  int levels_;
};

// Rejects n0 < 2 and levels < 1.
GridHierarchy build_hierarchy(int n0, int levels);

// A member of the piecewise-constant space on an n x n grid.
class CellField {
 public:
  CellField() = default;
  explicit CellField(int n, double value = 0.0);
  CellField(int n, std::vector<double> values);

  int n() const { return n_; }
  double h() const { return 1.0 / n_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& at(int ix, int iy) { return values_[index(ix, iy)]; }
  double at(int ix, int iy) const { return values_[index(ix, iy)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool all_finite() const;

  CellField& operator+=(const CellField& other);
  CellField& operator-=(const CellField& other);
  CellField& operator*=(double s);
  // this += a * x
  CellField& axpy(double a, const CellField& x);

  friend bool operator==(const CellField&, const CellField&) = default;

 private:
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(ix) + static_cast<std::size_t>(n_) * static_cast<std::size_t>(iy);
  }

  int n_ = 0;
  std::vector<double> values_;
};

CellField operator+(CellField a, const CellField& b);
CellField operator-(CellField a, const CellField& b);
CellField operator*(double s, CellField a);

// Boolean cell flags on an n x n grid; true marks an inactive cell.
class InactiveMask {
 public:
  InactiveMask() = default;
  explicit InactiveMask(int n, bool value = false);
  InactiveMask(int n, std::vector<std::uint8_t> flags);

  int n() const { return n_; }
  double h() const { return 1.0 / n_; }
  std::size_t size() const { return flags_.size(); }

  bool operator[](std::size_t i) const { return flags_[i] != 0; }
  void set(std::size_t i, bool v) { flags_[i] = v ? 1 : 0; }
  bool at(int ix, int iy) const { return flags_[static_cast<std::size_t>(ix) + static_cast<std::size_t>(n_) * iy] != 0; }
  void set(int ix, int iy, bool v) { flags_[static_cast<std::size_t>(ix) + static_cast<std::size_t>(n_) * iy] = v ? 1 : 0; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<std::size_t> indices() const;
  // Every flag of this mask is also set in `other`.
  bool subset_of(const InactiveMask& other) const;

  friend bool operator==(const InactiveMask&, const InactiveMask&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint8_t> flags_;
};

// h^2 * sum_i u_i v_i
double l2_inner(const CellField& u, const CellField& v);
double l2_norm(const CellField& u);

// Coarse value = mean of the four children. Requires an even side count.
CellField restrict_avg(const CellField& u);
// Each fine child inherits its parent's value.
CellField inject(const CellField& u);
// Zeroes every entry outside the mask.
CellField mask_project(const CellField& u, const InactiveMask& m);
// True when u vanishes outside m.
bool supported_on(const CellField& u, const InactiveMask& m);

// Coarse cell flagged iff at least one of its four children is flagged.
InactiveMask coarsen_inactive_set(const InactiveMask& m);
double domain_measure(const InactiveMask& m);
// Measure of fine cells lying in flagged coarse cells that are not flagged
// themselves. The coarse mask must cover the fine one.
double numerical_boundary_measure(const InactiveMask& fine, const InactiveMask& coarse);

}  // namespace ssnmg
