#pragma once

#include <cstdint>
#include <vector>

#include "ssnmg/grid.hpp"

namespace ssnmg {

enum class CellState : std::uint8_t { inactive = 0, lower = 1, upper = 2 };

// Partition of the cells of one level into the inactive set I and the lower
// and upper active sets A^a, A^b.
class ActivePartition {
 public:
  ActivePartition() = default;
  // Everything inactive.
  explicit ActivePartition(int n);
  // Rejects masks that overlap or leave a cell uncovered.
  ActivePartition(const InactiveMask& inactive, const InactiveMask& lower, const InactiveMask& upper);

  int n() const { return n_; }
  std::size_t size() const { return states_.size(); }
  CellState operator[](std::size_t i) const { return states_[i]; }
  void set(std::size_t i, CellState s) { states_[i] = s; }

  InactiveMask inactive_mask() const { return mask_of(CellState::inactive); }
  InactiveMask lower_mask() const { return mask_of(CellState::lower); }
  InactiveMask upper_mask() const { return mask_of(CellState::upper); }
  InactiveMask active_mask() const;

  std::size_t count(CellState s) const;

  friend bool operator==(const ActivePartition&, const ActivePartition&) = default;

 private:
  InactiveMask mask_of(CellState s) const;

  int n_ = 0;
  std::vector<CellState> states_;
};

}  // namespace ssnmg
